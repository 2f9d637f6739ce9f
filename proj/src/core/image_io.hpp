#ifndef FUSION_CORE_IMAGE_IO_HPP
#define FUSION_CORE_IMAGE_IO_HPP

#include <iosfwd>
#include <string>

#include "core/image.hpp"

namespace fusion {

/// Decode a binary PGM (P5) stream. Throws DataError on malformed input.
GrayImage decode_pgm(std::istream& in);

/// Write a binary PGM (P5), maxval 255.
void write_pgm(std::ostream& out, const GrayImage& img);

/// Write a BinaryImage as PGM: ink -> 0 (black), background -> 255.
void write_pgm(const std::string& path, const BinaryImage& img);

/// Decode a PNG file as 8-bit grayscale (color inputs are converted).
GrayImage decode_png(const std::string& path);

/// Load a grayscale image, dispatching on the file's magic bytes.
/// Supports PGM (P5) and PNG. Throws IoError / DataError.
GrayImage load_gray_image(const std::string& path);

} // namespace fusion

#endif

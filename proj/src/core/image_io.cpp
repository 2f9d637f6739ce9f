#include "core/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include "core/error.hpp"

namespace fusion {

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one integer.
int pgm_int(std::istream& in) {
    int c = in.peek();
    while (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            in.get();
        }
        c = in.peek();
    }
    int value = -1;
    in >> value;
    if (!in || value < 0) raise(ErrorCode::DataError, "PGM: malformed header");
    return value;
}

} // namespace

GrayImage decode_pgm(std::istream& in) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        raise(ErrorCode::DataError, "PGM: not a P5 file");
    const int width = pgm_int(in);
    const int height = pgm_int(in);
    const int maxval = pgm_int(in);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255)
        raise(ErrorCode::DataError, "PGM: unsupported geometry or maxval");
    in.get(); // single whitespace byte before the raster
    GrayImage img(width, height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        raise(ErrorCode::DataError, "PGM: truncated raster");
    return img;
}

void write_pgm(std::ostream& out, const GrayImage& img) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const std::string& path, const BinaryImage& img) {
    GrayImage gray(BinaryImage::side, BinaryImage::side);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        gray.pixels[i] = img.pixels[i] ? 0 : 255;
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot open for writing: " + path);
    write_pgm(out, gray);
    if (!out) raise(ErrorCode::IoError, "write failed: " + path);
}

GrayImage decode_png(const std::string& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"),
                                                       &std::fclose);
    if (!fp) raise(ErrorCode::IoError, "cannot open: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(ErrorCode::DataError, "PNG: decoder init failed");
    }
    GrayImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(ErrorCode::DataError, "PNG: decode failed: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize everything to one 8-bit gray channel.
    const png_byte color = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<std::size_t>(y)] = img.pixels.data() + static_cast<std::size_t>(y) * img.width;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

GrayImage load_gray_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) raise(ErrorCode::IoError, "cannot open: " + path);
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P' && magic[1] == '5') {
        std::ifstream in(path, std::ios::binary);
        return decode_pgm(in);
    }
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P')
        return decode_png(path);
    raise(ErrorCode::DataError, "unsupported image format: " + path);
}

} // namespace fusion

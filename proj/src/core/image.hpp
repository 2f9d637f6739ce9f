#ifndef FUSION_CORE_IMAGE_HPP
#define FUSION_CORE_IMAGE_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace fusion {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Fixed 32x32 binarized glyph, the unit of classification.
/// Convention: 1 = black = ink, 0 = white.
struct BinaryImage {
    static constexpr int side = 32;

    std::vector<std::uint8_t> pixels; // side*side entries in {0,1}

    BinaryImage() : pixels(side * side, 0) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * side + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * side + x];
    }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < side && y >= 0 && y < side;
    }
    bool operator==(const BinaryImage& other) const { return pixels == other.pixels; }
};

/// Integer pixel coordinate, origin top-left.
struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

/// Threshold to pure black/white. A pixel is black (0 in the gray output,
/// ink after conversion) iff intensity <= threshold.
GrayImage binarize(const GrayImage& img, int threshold);

/// Nearest-neighbor resample to the canonical 32x32 frame, then threshold.
/// Nearest-neighbor keeps already-binary sources binary without a second
/// threshold pass. Throws EmptyImage for a 0-sized source.
BinaryImage resize_to_canonical(const GrayImage& img, int threshold = 128);

/// Mean column/row index of the ink pixels. Throws BlankImage when the
/// image has no ink.
std::pair<double, double> centroid(const BinaryImage& img);

/// round-half-up, used wherever a real centroid must become a pixel.
inline int round_half_up(double v) {
    return static_cast<int>(std::floor(v + 0.5));
}

/// Bresenham raster of the segment a->b. 8-connected, starts at a, ends
/// at b. Internally the segment is always walked from the lexicographically
/// smaller endpoint (by (x, y)) and reversed if needed, so
/// bresenham_line(a, b) == reverse(bresenham_line(b, a)) exactly.
std::vector<Point> bresenham_line(Point a, Point b);

} // namespace fusion

#endif

#include "core/image.hpp"

#include <algorithm>
#include <cstdlib>

#include "core/error.hpp"

namespace fusion {

GrayImage binarize(const GrayImage& img, int threshold) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = img.pixels[i] <= threshold ? 0 : 255;
    return out;
}

BinaryImage resize_to_canonical(const GrayImage& img, int threshold) {
    if (img.width < 1 || img.height < 1)
        raise(ErrorCode::EmptyImage, "resize_to_canonical: empty source image");
    BinaryImage out;
    for (int y = 0; y < BinaryImage::side; ++y) {
        const int sy = y * img.height / BinaryImage::side;
        for (int x = 0; x < BinaryImage::side; ++x) {
            const int sx = x * img.width / BinaryImage::side;
            out.at(x, y) = img.at(sx, sy) <= threshold ? 1 : 0;
        }
    }
    return out;
}

std::pair<double, double> centroid(const BinaryImage& img) {
    long long sx = 0, sy = 0, n = 0;
    for (int y = 0; y < BinaryImage::side; ++y)
        for (int x = 0; x < BinaryImage::side; ++x)
            if (img.at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
    if (n == 0)
        raise(ErrorCode::BlankImage, "centroid: image has no ink");
    return {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

namespace {

// Classic integer Bresenham covering all octants.
std::vector<Point> raster(Point a, Point b) {
    std::vector<Point> points;
    int x0 = a.x, y0 = a.y;
    const int dx = std::abs(b.x - x0), sx = x0 < b.x ? 1 : -1;
    const int dy = -std::abs(b.y - y0), sy = y0 < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        points.push_back({x0, y0});
        if (x0 == b.x && y0 == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return points;
}

} // namespace

std::vector<Point> bresenham_line(Point a, Point b) {
    const bool swapped = (b.x < a.x) || (b.x == a.x && b.y < a.y);
    std::vector<Point> points = swapped ? raster(b, a) : raster(a, b);
    if (swapped) std::reverse(points.begin(), points.end());
    return points;
}

} // namespace fusion

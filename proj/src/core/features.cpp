#include "core/features.hpp"

#include <cmath>

#include "core/error.hpp"

namespace fusion {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kSide = BinaryImage::side;
constexpr int kFrameCenter = kSide / 2; // rounded centroid of a full frame
} // namespace

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Raw: return "raw";
        case FeatureKind::Radial: return "radial";
        case FeatureKind::Gabor: return "gabor";
        case FeatureKind::PcaReduced: return "pca-reduced";
    }
    return "?";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "raw") return FeatureKind::Raw;
    if (name == "radial") return FeatureKind::Radial;
    if (name == "gabor") return FeatureKind::Gabor;
    if (name == "pca-reduced") return FeatureKind::PcaReduced;
    raise(ErrorCode::DataError, "unknown feature kind: " + name);
}

void GaborParams::validate() const {
    if (sigma_x <= 0.0 || sigma_y <= 0.0)
        raise(ErrorCode::DegenerateInput, "GaborParams: sigmas must be positive");
    if (kernel_size < 3 || kernel_size % 2 == 0)
        raise(ErrorCode::DegenerateInput, "GaborParams: kernel_size must be odd and >= 3");
}

GaborBank default_gabor_bank(int kernel_size, double omega, double sigma) {
    if (sigma <= 0.0) sigma = kernel_size / 5.0;
    GaborBank bank;
    for (int i = 0; i < 4; ++i) {
        GaborParams p;
        p.omega = omega;
        p.theta = i * kPi / 4.0; // 0, 45, 90, 135 degrees
        p.sigma_x = sigma;
        p.sigma_y = sigma;
        p.kernel_size = kernel_size;
        p.validate();
        bank.push_back(p);
    }
    return bank;
}

GaborKernel gabor_kernel(const GaborParams& params) {
    params.validate();
    GaborKernel kernel;
    kernel.size = params.kernel_size;
    kernel.values.resize(static_cast<std::size_t>(kernel.size) * kernel.size);
    const int half = kernel.size / 2;
    const double norm = 1.0 / (2.0 * kPi * params.sigma_x * params.sigma_y);
    const double ct = std::cos(params.theta), st = std::sin(params.theta);
    for (int iy = 0; iy < kernel.size; ++iy) {
        for (int ix = 0; ix < kernel.size; ++ix) {
            const double x = ix - half, y = iy - half;
            const double rx = x / params.sigma_x, ry = y / params.sigma_y;
            const double envelope = norm * std::exp(-0.5 * (rx * rx + ry * ry));
            const double phase = params.omega * (x * ct + y * st);
            kernel.at(ix, iy) = envelope * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return kernel;
}

FeatureVector raw_feature(const BinaryImage& img) {
    FeatureVector out;
    out.kind = FeatureKind::Raw;
    out.values.assign(img.pixels.begin(), img.pixels.end());
    return out;
}

const std::vector<Point>& frame_perimeter() {
    static const std::vector<Point> perimeter = [] {
        std::vector<Point> pts;
        pts.reserve(4 * kSide);
        for (int x = 0; x < kSide; ++x) pts.push_back({x, 0});
        for (int y = 0; y < kSide; ++y) pts.push_back({kSide - 1, y});
        for (int x = kSide - 1; x >= 0; --x) pts.push_back({x, kSide - 1});
        for (int y = kSide - 1; y >= 0; --y) pts.push_back({0, y});
        return pts;
    }();
    return perimeter;
}

FeatureVector radial_feature(const BinaryImage& img) {
    const auto [cx, cy] = centroid(img); // throws BlankImage
    const Point origin{round_half_up(cx), round_half_up(cy)};

    FeatureVector out;
    out.kind = FeatureKind::Radial;
    out.values.reserve(frame_perimeter().size());
    for (const Point& p : frame_perimeter()) {
        const Point target{origin.x + (p.x - kFrameCenter), origin.y + (p.y - kFrameCenter)};
        double dist = 0.0;
        for (const Point& q : bresenham_line(origin, target)) {
            if (!img.in_bounds(q.x, q.y)) continue; // off-frame ray tail is white
            if (img.at(q.x, q.y)) {
                const double dx = q.x - origin.x, dy = q.y - origin.y;
                dist = std::sqrt(dx * dx + dy * dy);
            }
        }
        out.values.push_back(dist);
    }
    return out;
}

FeatureVector gabor_feature(const BinaryImage& img, const GaborBank& bank) {
    FeatureVector out;
    out.kind = FeatureKind::Gabor;
    out.values.reserve(static_cast<std::size_t>(kSide) * kSide * bank.size());
    for (const GaborParams& params : bank) {
        const GaborKernel kernel = gabor_kernel(params);
        const int half = kernel.size / 2;
        for (int py = 0; py < kSide; ++py) {
            for (int px = 0; px < kSide; ++px) {
                std::complex<double> acc{0.0, 0.0};
                for (int iy = 0; iy < kernel.size; ++iy) {
                    const int sy = py + iy - half;
                    if (sy < 0 || sy >= kSide) continue;
                    for (int ix = 0; ix < kernel.size; ++ix) {
                        const int sx = px + ix - half;
                        if (sx < 0 || sx >= kSide) continue;
                        if (img.at(sx, sy)) acc += kernel.at(ix, iy);
                    }
                }
                out.values.push_back(std::abs(acc));
            }
        }
    }
    return out;
}

} // namespace fusion

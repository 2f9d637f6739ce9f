#ifndef FUSION_CORE_FEATURES_HPP
#define FUSION_CORE_FEATURES_HPP

#include <complex>
#include <string>
#include <vector>

#include "core/image.hpp"

namespace fusion {

enum class FeatureKind { Raw, Radial, Gabor, PcaReduced };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

struct FeatureVector {
    FeatureKind kind = FeatureKind::Raw;
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

/// Parameters of one 2-D Gabor filter: radial frequency omega (rad/pixel),
/// orientation theta (rad), Gaussian envelope sigmas (pixels), odd kernel
/// side length. The envelope does not rotate with theta; only the carrier
/// does.
struct GaborParams {
    double omega = 0.0;
    double theta = 0.0;
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    int kernel_size = 7;

    void validate() const; // throws DegenerateInput on bad sigmas/size
};

using GaborBank = std::vector<GaborParams>;

/// Four orientations (0, 45, 90, 135 degrees) sharing omega, sigma and
/// kernel size. sigma defaults to kernel_size / 5.
GaborBank default_gabor_bank(int kernel_size = 7, double omega = 1.5707963267948966,
                             double sigma = 0.0);

/// Complex kernel, row-major, side kernel_size; entry (ix, iy) holds the
/// filter at offset (ix - size/2, iy - size/2) from the center.
struct GaborKernel {
    int size = 0;
    std::vector<std::complex<double>> values;

    const std::complex<double>& at(int ix, int iy) const {
        return values[static_cast<std::size_t>(iy) * size + ix];
    }
    std::complex<double>& at(int ix, int iy) {
        return values[static_cast<std::size_t>(iy) * size + ix];
    }
};

GaborKernel gabor_kernel(const GaborParams& params);

/// Row-major flattening of the 32x32 glyph: dim 1024, values in {0, 1}.
FeatureVector raw_feature(const BinaryImage& img);

/// The 128 perimeter pixels of the canonical frame, in fixed order:
/// top row left->right, right column top->bottom, bottom row right->left,
/// left column bottom->top. Each side contributes a full 32 pixels (the
/// thesis counts 32x4 = 128, so seam corners appear twice).
const std::vector<Point>& frame_perimeter();

/// 128 centroid-ray distances. Each perimeter pixel defines a ray
/// displacement relative to the frame center (16, 16); the ray is cast
/// from the rounded centroid along that displacement, so the geometry
/// translates with the glyph and the feature is invariant under whole-pixel
/// shifts that keep the glyph inside the frame. Recorded value: Euclidean
/// distance from the ray origin to the last ink pixel on the ray, 0 if the
/// ray has no ink. Throws BlankImage for an empty glyph.
FeatureVector radial_feature(const BinaryImage& img);

/// Per orientation: correlate the kernel over the image (zero padding,
/// stride 1, 32x32 output), keep the complex magnitude, flatten row-major;
/// orientations are concatenated in bank order. The default 4-filter bank
/// yields dim 4096. Magnitude (rather than real/imaginary part) is kept:
/// it is phase-insensitive, which is what a stroke-energy feature needs.
FeatureVector gabor_feature(const BinaryImage& img, const GaborBank& bank);

} // namespace fusion

#endif

#ifndef FUSION_CORE_CONFIDENCE_HPP
#define FUSION_CORE_CONFIDENCE_HPP

#include <string>
#include <vector>

#include "core/classifiers.hpp"

namespace fusion {

/// Zero-distance guard shared by the ratio confidences.
inline constexpr double kDistanceEpsilon = 1e-9;

enum class ConfidenceSource { ConfusionDerived, DistanceRatio };

/// class x classifier trust scores (M rows, R columns).
struct ConfidenceMatrix {
    int class_count = 0;
    int classifier_count = 0;
    ConfidenceSource source = ConfidenceSource::ConfusionDerived;
    std::vector<double> v; // row-major M x R

    ConfidenceMatrix() = default;
    ConfidenceMatrix(int m, int r, ConfidenceSource src)
        : class_count(m), classifier_count(r), source(src),
          v(static_cast<std::size_t>(m) * r, 0.0) {}

    double at(int cls, int clf) const {
        return v[static_cast<std::size_t>(cls) * classifier_count + clf];
    }
    double& at(int cls, int clf) {
        return v[static_cast<std::size_t>(cls) * classifier_count + clf];
    }
    bool empty() const { return v.empty(); }
};

/// Per-class recall read off a confusion matrix: diagonal over column sum,
/// 0 for an empty column. With 5-sample test splits every value is a
/// multiple of 0.2.
std::vector<double> confidence_from_confusion(const ConfusionMatrix& cm);

/// Stack per-classifier confidence columns into an M x R matrix.
ConfidenceMatrix confidence_matrix_from_columns(const std::vector<std::vector<double>>& columns,
                                                ConfidenceSource source);

/// dis2 / max(dis1, eps): how far the second-best (other-class) match is
/// from the best one.
double margin_confidence(double dis1, double dis2);

/// Winner label plus avg_dist(winner) / max(distance, eps); equals 1 when
/// the query sits exactly at the class's average radius, grows as the match
/// gets closer.
std::pair<int, double> centroid_ratio_confidence(const CentroidModel& model,
                                                 const FeatureVector& q);

/// Fixed-width text grid: one row per class, one column per classifier,
/// 6 decimal places.
std::string format_confidence_matrix(const ConfidenceMatrix& conf);

} // namespace fusion

#endif

#ifndef FUSION_CORE_CLASSIFIERS_HPP
#define FUSION_CORE_CLASSIFIERS_HPP

#include <span>
#include <vector>

#include "core/features.hpp"

namespace fusion {

struct LabeledSample {
    FeatureVector features;
    int label = 0; // class index in 0..M-1
    int book = 0;
    int id = 0;    // stable sample number, unique within a split
};

/// Exemplar nearest-neighbor model: keeps every training sample, Euclidean
/// metric, linear scan (the corpus is ~1000 samples).
struct ExemplarModel {
    std::vector<LabeledSample> samples;
};

struct NnResult {
    int label = 0;
    double dis1 = 0.0; // distance to the globally nearest exemplar
    double dis2 = 0.0; // nearest distance among exemplars of any OTHER class
};

/// Per-class centroids plus the mean distance of each class's training
/// samples to their own centroid (the avg-distance classifier's scale).
struct ClassCentroid {
    int label = 0;
    std::vector<double> centroid;
    double avg_dist = 0.0;
};

struct CentroidModel {
    std::vector<ClassCentroid> classes; // ascending label order
};

/// Predicted-vs-true counts. Rows index the PREDICTED class, columns the
/// TRUE class, so column sums are per-class evaluated-sample counts.
struct ConfusionMatrix {
    int class_count = 0;
    std::vector<long long> counts; // row-major M x M

    explicit ConfusionMatrix(int m = 0)
        : class_count(m), counts(static_cast<std::size_t>(m) * m, 0) {}

    long long at(int predicted, int true_class) const {
        return counts[static_cast<std::size_t>(predicted) * class_count + true_class];
    }
    long long& at(int predicted, int true_class) {
        return counts[static_cast<std::size_t>(predicted) * class_count + true_class];
    }
    long long column_sum(int true_class) const;
    long long total() const;
    long long diagonal_sum() const;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

ExemplarModel fit_exemplar(std::vector<LabeledSample> training);

CentroidModel fit_centroid(const std::vector<LabeledSample>& training);

/// Globally nearest exemplar; dis2 is the best match outside the winning
/// class, so dis2/dis1 reads as a between-class margin. Ties on distance
/// go to the lowest class label. Throws EmptyModel / DimensionMismatch.
NnResult nn_classify(const ExemplarModel& model, const FeatureVector& q);

/// Nearest class centroid; ties to the lowest class label.
std::pair<int, double> centroid_classify(const CentroidModel& model, const FeatureVector& q);

/// Two-stage rule: dmin = nearest-centroid distance, then the class whose
/// average distance is nearest to dmin. Ties to the lowest class label.
int avgdist_classify(const CentroidModel& model, const FeatureVector& q);

/// Throws LengthMismatch / LabelOutOfRange.
ConfusionMatrix build_confusion(std::span<const int> preds, std::span<const int> truths,
                                int class_count);

} // namespace fusion

#endif

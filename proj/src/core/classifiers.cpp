#include "core/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "core/error.hpp"

namespace fusion {

long long ConfusionMatrix::column_sum(int true_class) const {
    long long sum = 0;
    for (int p = 0; p < class_count; ++p) sum += at(p, true_class);
    return sum;
}

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (long long c : counts) sum += c;
    return sum;
}

long long ConfusionMatrix::diagonal_sum() const {
    long long sum = 0;
    for (int c = 0; c < class_count; ++c) sum += at(c, c);
    return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(ErrorCode::DimensionMismatch, "euclidean_distance: dim mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

ExemplarModel fit_exemplar(std::vector<LabeledSample> training) {
    if (training.empty()) raise(ErrorCode::EmptyModel, "fit_exemplar: no training samples");
    const std::size_t dim = training.front().features.dim();
    for (const LabeledSample& s : training)
        if (s.features.dim() != dim)
            raise(ErrorCode::DimensionMismatch, "fit_exemplar: mixed feature dims");
    return ExemplarModel{std::move(training)};
}

CentroidModel fit_centroid(const std::vector<LabeledSample>& training) {
    if (training.empty()) raise(ErrorCode::EmptyModel, "fit_centroid: no training samples");
    const std::size_t dim = training.front().features.dim();
    std::map<int, std::vector<const LabeledSample*>> by_class;
    for (const LabeledSample& s : training) {
        if (s.features.dim() != dim)
            raise(ErrorCode::DimensionMismatch, "fit_centroid: mixed feature dims");
        by_class[s.label].push_back(&s);
    }
    CentroidModel model;
    for (const auto& [label, members] : by_class) {
        ClassCentroid cc;
        cc.label = label;
        cc.centroid.assign(dim, 0.0);
        for (const LabeledSample* s : members)
            for (std::size_t i = 0; i < dim; ++i) cc.centroid[i] += s->features.values[i];
        for (double& v : cc.centroid) v /= static_cast<double>(members.size());
        double total = 0.0;
        for (const LabeledSample* s : members)
            total += euclidean_distance(s->features.values, cc.centroid);
        cc.avg_dist = total / static_cast<double>(members.size());
        model.classes.push_back(std::move(cc));
    }
    return model;
}

NnResult nn_classify(const ExemplarModel& model, const FeatureVector& q) {
    if (model.samples.empty()) raise(ErrorCode::EmptyModel, "nn_classify: empty model");
    NnResult result;
    double best = std::numeric_limits<double>::infinity();
    int best_label = std::numeric_limits<int>::max();
    for (const LabeledSample& s : model.samples) {
        const double d = euclidean_distance(s.features.values, q.values);
        if (d < best || (d == best && s.label < best_label)) {
            best = d;
            best_label = s.label;
        }
    }
    result.label = best_label;
    result.dis1 = best;
    double second = std::numeric_limits<double>::infinity();
    for (const LabeledSample& s : model.samples) {
        if (s.label == best_label) continue;
        second = std::min(second, euclidean_distance(s.features.values, q.values));
    }
    result.dis2 = std::isfinite(second) ? second : 0.0; // single-class model
    return result;
}

std::pair<int, double> centroid_classify(const CentroidModel& model, const FeatureVector& q) {
    if (model.classes.empty()) raise(ErrorCode::EmptyModel, "centroid_classify: empty model");
    int best_label = -1;
    double best = std::numeric_limits<double>::infinity();
    for (const ClassCentroid& cc : model.classes) {
        const double d = euclidean_distance(cc.centroid, q.values);
        if (d < best) { // classes are in ascending label order, ties keep the first
            best = d;
            best_label = cc.label;
        }
    }
    return {best_label, best};
}

int avgdist_classify(const CentroidModel& model, const FeatureVector& q) {
    const double dmin = centroid_classify(model, q).second;
    int best_label = -1;
    double best = std::numeric_limits<double>::infinity();
    for (const ClassCentroid& cc : model.classes) {
        const double gap = std::abs(dmin - cc.avg_dist);
        if (gap < best) {
            best = gap;
            best_label = cc.label;
        }
    }
    return best_label;
}

ConfusionMatrix build_confusion(std::span<const int> preds, std::span<const int> truths,
                                int class_count) {
    if (preds.size() != truths.size())
        raise(ErrorCode::LengthMismatch, "build_confusion: preds/truths length mismatch");
    ConfusionMatrix cm(class_count);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] < 0 || preds[i] >= class_count || truths[i] < 0 || truths[i] >= class_count)
            raise(ErrorCode::LabelOutOfRange, "build_confusion: label out of range");
        ++cm.at(preds[i], truths[i]);
    }
    return cm;
}

} // namespace fusion

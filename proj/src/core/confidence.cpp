#include "core/confidence.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace fusion {

std::vector<double> confidence_from_confusion(const ConfusionMatrix& cm) {
    std::vector<double> conf(static_cast<std::size_t>(cm.class_count), 0.0);
    for (int c = 0; c < cm.class_count; ++c) {
        const long long total = cm.column_sum(c);
        conf[static_cast<std::size_t>(c)] =
            total == 0 ? 0.0 : static_cast<double>(cm.at(c, c)) / static_cast<double>(total);
    }
    return conf;
}

ConfidenceMatrix confidence_matrix_from_columns(const std::vector<std::vector<double>>& columns,
                                                ConfidenceSource source) {
    if (columns.empty()) raise(ErrorCode::LengthMismatch, "confidence matrix: no columns");
    const int m = static_cast<int>(columns.front().size());
    for (const auto& col : columns)
        if (static_cast<int>(col.size()) != m)
            raise(ErrorCode::LengthMismatch, "confidence matrix: ragged columns");
    ConfidenceMatrix conf(m, static_cast<int>(columns.size()), source);
    for (int r = 0; r < conf.classifier_count; ++r)
        for (int c = 0; c < m; ++c)
            conf.at(c, r) = columns[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return conf;
}

double margin_confidence(double dis1, double dis2) {
    return dis2 / std::max(dis1, kDistanceEpsilon);
}

std::pair<int, double> centroid_ratio_confidence(const CentroidModel& model,
                                                 const FeatureVector& q) {
    const auto [label, distance] = centroid_classify(model, q);
    for (const ClassCentroid& cc : model.classes) {
        if (cc.label == label)
            return {label, cc.avg_dist / std::max(distance, kDistanceEpsilon)};
    }
    raise(ErrorCode::EmptyModel, "centroid_ratio_confidence: winner class missing");
}

std::string format_confidence_matrix(const ConfidenceMatrix& conf) {
    std::ostringstream out;
    out << "CLASS";
    for (int r = 0; r < conf.classifier_count; ++r) out << "  CLASSIFIER-" << (r + 1);
    out << "\n";
    for (int c = 0; c < conf.class_count; ++c) {
        char label[16];
        std::snprintf(label, sizeof(label), "%5d", c);
        out << label;
        for (int r = 0; r < conf.classifier_count; ++r) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), "  %12.6f", conf.at(c, r));
            out << cell;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace fusion

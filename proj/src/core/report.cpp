#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/pipeline.hpp"

namespace fusion {

namespace {

using nlohmann::json;

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string label_text(int label, int class_count) {
    return label == class_count ? "REJECT" : std::to_string(label);
}

void emit_confusion(std::ostringstream& out, const ConfusionMatrix& cm) {
    for (int p = 0; p < cm.class_count; ++p) {
        for (int t = 0; t < cm.class_count; ++t) {
            if (t) out << " ";
            out << pad_left(std::to_string(cm.at(p, t)), 4);
        }
        out << "\n";
    }
}

json confusion_json(const ConfusionMatrix& cm) {
    json rows = json::array();
    for (int p = 0; p < cm.class_count; ++p) {
        json row = json::array();
        for (int t = 0; t < cm.class_count; ++t) row.push_back(cm.at(p, t));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string emit_report_text(const RunReport& report) {
    std::ostringstream out;
    out << "FUSIONBENCH RUN REPORT\n";
    out << "RULE = " << report.rule << "\n";
    out << "SEED = " << report.seed << "\n";
    out << "RNG = " << report.rng_name << "\n";
    out << "CLASSES = " << report.class_count << "\n";
    out << "CONFIDENCE SPLIT = " << report.confidence_split << "\n";
    out << "PCA COMPONENTS = " << report.pca_components_effective << "\n";
    out << "GABOR KERNEL = " << report.gabor_kernel_size << "\n";
    out << "\n";

    for (int i = 0; i < kClassifierCount; ++i) {
        const ClassifierBlock& block = report.classifiers[static_cast<std::size_t>(i)];
        out << "CONFUSION MATRIX OF CLASSIFIER-" << (i + 1) << " (" << block.name
            << "), rows = predicted, columns = true\n";
        emit_confusion(out, block.confusion);
        out << "CLASSIFIER-" << (i + 1) << " " << report.confidence_split
            << " ACCURACY = " << fixed2(block.split_accuracy) << " %\n";
        out << "CLASSIFIER-" << (i + 1)
            << " VALIDATION ACCURACY = " << fixed2(block.validation_accuracy) << " %\n";
        out << "\n";
    }

    if (!report.confidence.empty()) {
        out << "THE CONFIDENCE OF EACH CLASSIFIER ON INDIVIDUAL CLASSES\n\n";
        out << format_confidence_matrix(report.confidence);
        out << "\n";
    }

    if (!report.test_confidences.empty()) {
        out << "CONFIDENCE OF EACH SAMPLE (" << report.confidence_split << " split)\n\n";
        out << "SAMPLE  CLASSIFIER-1  CLASSIFIER-2  CLASSIFIER-3\n";
        for (const TestSampleConfidence& tc : report.test_confidences) {
            out << pad_left(std::to_string(tc.index), 6);
            for (double c : tc.confidences) out << "  " << pad_left(fixed6(c), 12);
            out << "\n";
        }
        out << "\n";
    }

    const bool h5 = report.rule == "h5";
    out << "SAMPLE  CLASSIFIER-1  CLASSIFIER-2  CLASSIFIER-3  ACTUAL-CLASS  PREDICTED-CLASS";
    if (h5) out << "  CONF-1  CONF-2  CONF-3  RESULT";
    out << "\n";
    for (const SampleRow& row : report.rows) {
        out << pad_left(std::to_string(row.index), 6);
        for (int pred : row.predictions) out << "  " << pad_left(std::to_string(pred), 12);
        out << "  " << pad_left(std::to_string(row.actual), 12);
        out << "  " << pad_left(label_text(row.fused, report.class_count), 15);
        if (h5) {
            for (double c : row.confidences) out << "  " << fixed6(c);
            out << "  " << fixed6(row.result_score);
        }
        out << "\n";
    }
    out << "\n";
    out << "CONSIDERED = " << report.account.considered << "\n";
    out << "CORRECT = " << report.account.correct << "\n";
    out << "ACCURACY = " << fixed2(report.account.accuracy_percent) << " %\n";
    out << "The samples discarded are: ";
    for (std::size_t i = 0; i < report.account.discarded.size(); ++i) {
        if (i) out << ", ";
        out << report.account.discarded[static_cast<std::size_t>(i)];
    }
    out << "\n";
    return out.str();
}

std::string emit_report_json(const RunReport& report) {
    json j;
    j["rule"] = report.rule;
    j["seed"] = report.seed;
    j["rng"] = report.rng_name;
    j["class_count"] = report.class_count;
    j["class_labels"] = report.class_labels;
    j["confidence_split"] = report.confidence_split;
    j["reject_label"] = report.class_count;
    j["settings"] = {{"pca_components", report.pca_components_effective},
                     {"gabor_kernel_size", report.gabor_kernel_size}};

    j["classifiers"] = json::array();
    for (const ClassifierBlock& block : report.classifiers) {
        j["classifiers"].push_back({{"name", block.name},
                                    {"confusion", confusion_json(block.confusion)},
                                    {"split_accuracy", block.split_accuracy},
                                    {"validation_accuracy", block.validation_accuracy}});
    }

    if (!report.confidence.empty()) {
        json rows = json::array();
        for (int c = 0; c < report.confidence.class_count; ++c) {
            json row = json::array();
            for (int r = 0; r < report.confidence.classifier_count; ++r)
                row.push_back(report.confidence.at(c, r));
            rows.push_back(std::move(row));
        }
        j["confidence_matrix"] = std::move(rows);
    }

    if (!report.test_confidences.empty()) {
        json rows = json::array();
        for (const TestSampleConfidence& tc : report.test_confidences)
            rows.push_back({{"sample", tc.index}, {"confidences", tc.confidences}});
        j["test_sample_confidences"] = std::move(rows);
    }

    j["samples"] = json::array();
    for (const SampleRow& row : report.rows) {
        json r = {{"sample", row.index},
                  {"id", row.dataset_id},
                  {"predictions", row.predictions},
                  {"actual", row.actual},
                  {"predicted", row.fused},
                  {"considered", row.considered}};
        if (report.rule == "h2" || report.rule == "h5") {
            r["confidences"] = row.confidences;
            if (report.rule == "h5") r["result"] = row.result_score;
        }
        j["samples"].push_back(std::move(r));
    }

    j["considered"] = report.account.considered;
    j["correct"] = report.account.correct;
    j["accuracy"] = report.account.accuracy_percent;
    j["discarded"] = report.account.discarded;
    return j.dump(2) + "\n";
}

std::string emit_report(const RunReport& report, const std::string& format) {
    if (format == "text") return emit_report_text(report);
    if (format == "json") return emit_report_json(report);
    raise(ErrorCode::ConfigError, "report format must be text or json");
}

std::string emit_sweep_text(const SweepTable& table) {
    std::ostringstream out;
    const bool pca = table.parameter == "pca_k";
    const std::string value_header =
        pca ? "Number of Principal components retained" : "Size of the GABOR kernel";
    const std::string acc_header = pca ? "Final accuracy of the classifier" : "Accuracy";
    out << value_header << "  " << acc_header << "\n";
    for (const SweepRow& row : table.rows) {
        out << pad_left(std::to_string(row.value), value_header.size()) << "  "
            << fixed2(row.accuracy_percent) << " %\n";
    }
    return out.str();
}

std::string emit_sweep_json(const SweepTable& table) {
    json j;
    j["parameter"] = table.parameter;
    j["rows"] = json::array();
    for (const SweepRow& row : table.rows)
        j["rows"].push_back({{"value", row.value}, {"accuracy", row.accuracy_percent}});
    return j.dump(2) + "\n";
}

} // namespace fusion

#ifndef FUSION_CORE_PIPELINE_HPP
#define FUSION_CORE_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/confidence.hpp"
#include "core/dataset.hpp"

namespace fusion {

inline constexpr int kClassifierCount = 3;

/// One validation sample in the summary table. fused == class_count means
/// the combiner rejected the sample.
struct SampleRow {
    int index = 0;      // SAMPLE column, validation order
    int dataset_id = 0; // manifest record id
    std::array<int, kClassifierCount> predictions{};
    int actual = 0;
    int fused = 0;
    bool considered = false;
    std::array<double, kClassifierCount> confidences{}; // per-sample confs (h2/h5)
    double result_score = 0.0;                          // h5's winning sum
};

struct ClassifierBlock {
    std::string name;
    ConfusionMatrix confusion;        // on the confidence split
    double split_accuracy = 0.0;      // percent, on that split
    double validation_accuracy = 0.0; // percent
};

struct AccuracyAccount {
    std::size_t considered = 0;
    std::size_t correct = 0;
    double accuracy_percent = 0.0;
    std::vector<int> discarded; // SAMPLE indices, ascending
};

/// The thesis's accounting rule: a sample counts iff at least one base
/// classifier predicted the true label; accuracy is fused-correct among
/// the considered.
AccuracyAccount filtered_accuracy(std::span<const SampleRow> rows);

struct TestSampleConfidence {
    int index = 0;
    std::array<double, kClassifierCount> confidences{};
};

struct RunReport {
    std::string rule;
    std::uint64_t seed = 0;
    std::string rng_name;
    int class_count = 0;
    std::vector<int> class_labels; // dense index -> manifest label
    std::string confidence_split;
    int pca_components_effective = 0;
    int gabor_kernel_size = 0;
    std::array<ClassifierBlock, kClassifierCount> classifiers;
    ConfidenceMatrix confidence;                          // empty unless h1/h3/h4
    std::vector<TestSampleConfidence> test_confidences;   // h2 only
    std::vector<SampleRow> rows;
    AccuracyAccount account;
};

/// Fit the rule's base trio, build its confidences, fuse the validation
/// split and account. Deterministic for a fixed config and seed.
RunReport run_pipeline(const RunConfig& cfg);

std::string emit_report_text(const RunReport& report);
std::string emit_report_json(const RunReport& report);
std::string emit_report(const RunReport& report, const std::string& format);

struct SweepRow {
    int value = 0;
    double accuracy_percent = 0.0;
};

struct SweepTable {
    std::string parameter; // pca_k or gabor_kernel
    std::vector<SweepRow> rows;
};

/// One pipeline run per value with everything else (seed included) fixed;
/// reports the Gabor+PCA classifier's validation accuracy, the quantity
/// both sweep tables track.
SweepTable sweep(const RunConfig& cfg, const std::string& parameter, std::span<const int> values);

std::string emit_sweep_text(const SweepTable& table);
std::string emit_sweep_json(const SweepTable& table);

} // namespace fusion

#endif

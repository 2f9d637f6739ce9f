#ifndef FUSION_CORE_CONFIG_HPP
#define FUSION_CORE_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fusion {

/// Everything a pipeline run needs. Parsed from line-oriented
/// "key = value" text; '#' starts a comment. CLI flags override by calling
/// apply() again with the flag's key.
struct RunConfig {
    // data source: exactly one of manifest / synth must be configured
    std::string manifest_path;
    int synth_classes = 0; // > 0 enables the synthetic corpus
    int synth_per_class = 25;
    double synth_noise = 0.02;

    std::uint64_t seed = 1;
    std::string hypothesis = "h1";

    int binarize_threshold = 128;
    int min_samples = 25;

    int pca_components = 110;
    int gabor_kernel_size = 7;
    double gabor_omega = 1.5707963267948966; // pi/2
    double gabor_sigma = 0.0;                // <= 0 means kernel_size / 5

    double vote_alpha = 0.25;     // margin voting threshold
    int adaboost_rounds = 20;
    int bagging_bags = 15;

    std::string confidence_split = "test"; // or "train" (resubstitution)
    std::string format = "text";           // or "json"

    /// Set one key; throws ConfigError for unknown keys or bad values.
    void apply(const std::string& key, const std::string& value);

    /// Full consistency check (source present, names valid). ConfigError.
    void validate() const;
};

/// Known rule names, in the CLI's order.
bool is_known_rule(const std::string& name);

RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

} // namespace fusion

#endif

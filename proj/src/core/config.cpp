#include "core/config.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <sstream>

#include "core/error.hpp"

namespace fusion {

namespace {

const std::array<const char*, 18> kRules = {
    "h1", "h2", "h3", "h4", "h5", "product", "sum", "max", "min", "mean", "median",
    "vote-unanimous", "vote-noconflict", "vote-margin", "avg-bayes", "ds", "adaboost", "bagging"};

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::ConfigError, "config: " + key + " expects an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::ConfigError, "config: " + key + " expects a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::ConfigError,
              "config: " + key + " expects an unsigned integer, got '" + value + "'");
    }
}

} // namespace

bool is_known_rule(const std::string& name) {
    for (const char* rule : kRules)
        if (name == rule) return true;
    return false;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "manifest") {
        manifest_path = value;
    } else if (key == "synth.classes") {
        synth_classes = parse_int(key, value);
    } else if (key == "synth.per_class") {
        synth_per_class = parse_int(key, value);
    } else if (key == "synth.noise") {
        synth_noise = parse_double(key, value);
    } else if (key == "seed") {
        seed = parse_u64(key, value);
    } else if (key == "hypothesis") {
        hypothesis = value;
    } else if (key == "binarize.threshold") {
        binarize_threshold = parse_int(key, value);
    } else if (key == "min_samples") {
        min_samples = parse_int(key, value);
    } else if (key == "pca.components") {
        pca_components = parse_int(key, value);
    } else if (key == "gabor.kernel_size") {
        gabor_kernel_size = parse_int(key, value);
    } else if (key == "gabor.omega") {
        gabor_omega = parse_double(key, value);
    } else if (key == "gabor.sigma") {
        gabor_sigma = parse_double(key, value);
    } else if (key == "vote.alpha") {
        vote_alpha = parse_double(key, value);
    } else if (key == "adaboost.rounds") {
        adaboost_rounds = parse_int(key, value);
    } else if (key == "bagging.bags") {
        bagging_bags = parse_int(key, value);
    } else if (key == "confidence.split") {
        confidence_split = value;
    } else if (key == "format") {
        format = value;
    } else {
        raise(ErrorCode::ConfigError, "config: unknown key '" + key + "'");
    }
}

void RunConfig::validate() const {
    if (manifest_path.empty() && synth_classes == 0)
        raise(ErrorCode::ConfigError, "config: set either manifest or synth.classes");
    if (!manifest_path.empty() && synth_classes != 0)
        raise(ErrorCode::ConfigError, "config: manifest and synth.classes are exclusive");
    if (!is_known_rule(hypothesis))
        raise(ErrorCode::ConfigError, "config: unknown hypothesis/rule '" + hypothesis + "'");
    if (binarize_threshold < 0 || binarize_threshold > 255)
        raise(ErrorCode::ConfigError, "config: binarize.threshold must be in 0..255");
    if (min_samples < 25)
        raise(ErrorCode::ConfigError, "config: min_samples must be >= 25 (15/5/5 split)");
    if (pca_components < 1)
        raise(ErrorCode::ConfigError, "config: pca.components must be >= 1");
    if (gabor_kernel_size < 3 || gabor_kernel_size % 2 == 0)
        raise(ErrorCode::ConfigError, "config: gabor.kernel_size must be odd and >= 3");
    if (hypothesis == "vote-margin" && !(vote_alpha > 0.0 && vote_alpha <= 1.0))
        raise(ErrorCode::ConfigError, "config: vote.alpha must be in (0, 1]");
    if (adaboost_rounds < 1)
        raise(ErrorCode::ConfigError, "config: adaboost.rounds must be >= 1");
    if (bagging_bags < 1)
        raise(ErrorCode::ConfigError, "config: bagging.bags must be >= 1");
    if (confidence_split != "test" && confidence_split != "train")
        raise(ErrorCode::ConfigError, "config: confidence.split must be test or train");
    if (format != "text" && format != "json")
        raise(ErrorCode::ConfigError, "config: format must be text or json");
    if (synth_classes != 0) {
        if (synth_classes < 2)
            raise(ErrorCode::ConfigError, "config: synth.classes must be >= 2");
        if (synth_per_class < 25)
            raise(ErrorCode::ConfigError, "config: synth.per_class must be >= 25");
        if (synth_noise < 0.0 || synth_noise > 1.0)
            raise(ErrorCode::ConfigError, "config: synth.noise must be in [0, 1]");
    }
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::ConfigError,
                  "config line " + std::to_string(line_no) + ": expected key = value");
        cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::ConfigError, "cannot open config file: " + path);
    return parse_config(in);
}

} // namespace fusion

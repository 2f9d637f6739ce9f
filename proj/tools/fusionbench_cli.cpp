// fusionbench command line: run / sweep / synth, all through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "fusionbench.h"

namespace {

struct ConfigDeleter {
    void operator()(fb_config* cfg) const { fb_config_free(cfg); }
};
struct ReportDeleter {
    void operator()(fb_report* report) const { fb_report_free(report); }
};

using ConfigPtr = std::unique_ptr<fb_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<fb_report, ReportDeleter>;

int fail(const fb_config* cfg, fb_status status) {
    std::cerr << "fusionbench: " << fb_config_error(cfg) << "\n";
    return static_cast<int>(status);
}

int write_output(const std::string& out_path, const char* payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "fusionbench: cannot write " << out_path << "\n";
        return static_cast<int>(FB_DATA_ERROR);
    }
    out << payload;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classifier-fusion benchmark: three feature-based nearest-neighbor "
                 "classifiers and the combination rules that fuse them"};
    app.require_subcommand(1);

    std::string config_path, hypothesis, format, out_path, param, values_csv;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "Run one seeded evaluation pipeline");
    run->add_option("--config", config_path, "Config file (key = value lines)")->required();
    run->add_option("--hypothesis", hypothesis, "h1..h5 or a combination rule name");
    run->add_option("--seed", seed, "Random seed")->each([&](const std::string&) { seed_set = true; });
    run->add_option("--format", format, "text or json");
    run->add_option("--out", out_path, "Write the report here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Re-run the pipeline over a parameter range");
    sweep->add_option("--config", config_path, "Config file (key = value lines)")->required();
    sweep->add_option("--param", param, "pca_k or gabor_kernel")->required();
    sweep->add_option("--values", values_csv, "Comma-separated integer values")->required();
    sweep->add_option("--seed", seed, "Random seed")->each([&](const std::string&) { seed_set = true; });
    sweep->add_option("--format", format, "text or json");
    sweep->add_option("--out", out_path, "Write the table here instead of stdout");

    int classes = 10, per_class = 25;
    double noise = 0.02;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic glyph corpus");
    synth->add_option("--classes", classes, "Number of classes")->required();
    synth->add_option("--per-class", per_class, "Samples per class (>= 25)")->required();
    synth->add_option("--noise", noise, "Pixel flip probability")->required();
    synth->add_option("--seed", seed, "Random seed")->each([&](const std::string&) { seed_set = true; });
    synth->add_option("--out", out_path, "Manifest path to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(FB_CONFIG_ERROR);
    }

    ConfigPtr cfg(fb_config_new());
    if (!cfg) {
        std::cerr << "fusionbench: out of memory\n";
        return static_cast<int>(FB_ERROR);
    }

    fb_status status = FB_OK;
    if (app.got_subcommand(run) || app.got_subcommand(sweep)) {
        status = fb_config_load_file(cfg.get(), config_path.c_str());
        if (status != FB_OK) return fail(cfg.get(), status);
    }
    if (!hypothesis.empty()) {
        status = fb_config_set(cfg.get(), "hypothesis", hypothesis.c_str());
        if (status != FB_OK) return fail(cfg.get(), status);
    }
    if (seed_set) {
        status = fb_config_set(cfg.get(), "seed", std::to_string(seed).c_str());
        if (status != FB_OK) return fail(cfg.get(), status);
    }
    if (!format.empty()) {
        status = fb_config_set(cfg.get(), "format", format.c_str());
        if (status != FB_OK) return fail(cfg.get(), status);
    }

    if (app.got_subcommand(run)) {
        fb_report* raw = nullptr;
        status = fb_run(cfg.get(), &raw);
        if (status != FB_OK) return fail(cfg.get(), status);
        ReportPtr report(raw);
        const bool json = format == "json";
        return write_output(out_path, json ? fb_report_json(report.get())
                                           : fb_report_text(report.get()));
    }

    if (app.got_subcommand(sweep)) {
        std::vector<int> values;
        std::size_t pos = 0;
        while (pos <= values_csv.size() && !values_csv.empty()) {
            const std::size_t comma = values_csv.find(',', pos);
            const std::string field = comma == std::string::npos
                                          ? values_csv.substr(pos)
                                          : values_csv.substr(pos, comma - pos);
            try {
                values.push_back(std::stoi(field));
            } catch (const std::exception&) {
                std::cerr << "fusionbench: bad sweep value '" << field << "'\n";
                return static_cast<int>(FB_CONFIG_ERROR);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        fb_report* raw = nullptr;
        status = fb_sweep(cfg.get(), param.c_str(), values.data(), values.size(), &raw);
        if (status != FB_OK) return fail(cfg.get(), status);
        ReportPtr report(raw);
        const bool json = format == "json";
        return write_output(out_path, json ? fb_report_json(report.get())
                                           : fb_report_text(report.get()));
    }

    // synth
    status = fb_config_set(cfg.get(), "synth.classes", std::to_string(classes).c_str());
    if (status == FB_OK)
        status = fb_config_set(cfg.get(), "synth.per_class", std::to_string(per_class).c_str());
    if (status == FB_OK) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", noise);
        status = fb_config_set(cfg.get(), "synth.noise", buf);
    }
    if (status != FB_OK) return fail(cfg.get(), status);
    status = fb_synth_write(cfg.get(), out_path.c_str());
    if (status != FB_OK) return fail(cfg.get(), status);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

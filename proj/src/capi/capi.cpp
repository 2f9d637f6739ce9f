#include "fusionbench.h"

#include <exception>
#include <string>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/pipeline.hpp"

struct fb_config {
    fusion::RunConfig cfg;
    std::string last_error;
};

struct fb_report {
    std::string text;
    std::string json;
    double accuracy = -1.0;
};

namespace {

fb_status status_for(const fusion::Error& err) {
    switch (err.code()) {
        case fusion::ErrorCode::ConfigError:
        case fusion::ErrorCode::InvalidAlpha:
        case fusion::ErrorCode::InvalidPriors:
        case fusion::ErrorCode::InvalidK:
            return FB_CONFIG_ERROR;
        case fusion::ErrorCode::IoError:
        case fusion::ErrorCode::DataError:
        case fusion::ErrorCode::InsufficientSamples:
        case fusion::ErrorCode::BlankImage:
        case fusion::ErrorCode::EmptyImage:
            return FB_DATA_ERROR;
        default:
            return FB_ERROR;
    }
}

template <typename Fn>
fb_status guarded(fb_config* cfg, Fn&& fn) {
    if (!cfg) return FB_ERROR;
    cfg->last_error.clear();
    try {
        fn();
        return FB_OK;
    } catch (const fusion::Error& err) {
        cfg->last_error = err.what();
        return status_for(err);
    } catch (const std::exception& err) {
        cfg->last_error = err.what();
        return FB_ERROR;
    } catch (...) {
        cfg->last_error = "unknown error";
        return FB_ERROR;
    }
}

} // namespace

extern "C" {

const char* fb_version(void) {
    return "fusionbench 1.0.0";
}

fb_config* fb_config_new(void) {
    return new (std::nothrow) fb_config();
}

void fb_config_free(fb_config* cfg) {
    delete cfg;
}

fb_status fb_config_load_file(fb_config* cfg, const char* path) {
    return guarded(cfg, [&] {
        if (!path) fusion::raise(fusion::ErrorCode::ConfigError, "null config path");
        cfg->cfg = fusion::load_config_file(path); // flags should be applied after loading
    });
}

fb_status fb_config_parse(fb_config* cfg, const char* text) {
    return guarded(cfg, [&] {
        if (!text) fusion::raise(fusion::ErrorCode::ConfigError, "null config text");
        cfg->cfg = fusion::parse_config_text(text);
    });
}

fb_status fb_config_set(fb_config* cfg, const char* key, const char* value) {
    return guarded(cfg, [&] {
        if (!key || !value) fusion::raise(fusion::ErrorCode::ConfigError, "null key or value");
        cfg->cfg.apply(key, value);
    });
}

const char* fb_config_error(const fb_config* cfg) {
    return cfg ? cfg->last_error.c_str() : "";
}

fb_status fb_run(fb_config* cfg, fb_report** out_report) {
    return guarded(cfg, [&] {
        if (!out_report) fusion::raise(fusion::ErrorCode::ConfigError, "null report sink");
        const fusion::RunReport report = fusion::run_pipeline(cfg->cfg);
        auto* out = new fb_report();
        out->text = fusion::emit_report_text(report);
        out->json = fusion::emit_report_json(report);
        out->accuracy = report.account.accuracy_percent;
        *out_report = out;
    });
}

fb_status fb_sweep(fb_config* cfg, const char* param, const int* values, size_t n_values,
                   fb_report** out_report) {
    return guarded(cfg, [&] {
        if (!out_report || !param || (!values && n_values > 0))
            fusion::raise(fusion::ErrorCode::ConfigError, "null sweep arguments");
        const std::span<const int> span(values, n_values);
        const fusion::SweepTable table = fusion::sweep(cfg->cfg, param, span);
        auto* out = new fb_report();
        out->text = fusion::emit_sweep_text(table);
        out->json = fusion::emit_sweep_json(table);
        out->accuracy = -1.0;
        *out_report = out;
    });
}

fb_status fb_synth_write(fb_config* cfg, const char* manifest_path) {
    return guarded(cfg, [&] {
        if (!manifest_path) fusion::raise(fusion::ErrorCode::ConfigError, "null manifest path");
        if (cfg->cfg.synth_classes == 0)
            fusion::raise(fusion::ErrorCode::ConfigError, "synth.classes not configured");
        const fusion::Corpus corpus =
            fusion::synth_corpus(cfg->cfg.synth_classes, cfg->cfg.synth_per_class,
                                 cfg->cfg.synth_noise, cfg->cfg.seed);
        fusion::write_synth_corpus(corpus, manifest_path);
    });
}

const char* fb_report_text(const fb_report* report) {
    return report ? report->text.c_str() : "";
}

const char* fb_report_json(const fb_report* report) {
    return report ? report->json.c_str() : "";
}

double fb_report_accuracy(const fb_report* report) {
    return report ? report->accuracy : -1.0;
}

void fb_report_free(fb_report* report) {
    delete report;
}

} // extern "C"

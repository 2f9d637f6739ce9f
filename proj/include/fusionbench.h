/*
 * fusionbench C API.
 *
 * Everything goes through two opaque handles: fb_config collects run
 * settings (from a config file, inline text, or key/value calls) and
 * fb_report holds a finished run's output. All functions returning
 * fb_status report FB_OK on success; on failure the config handle keeps
 * a human-readable message retrievable via fb_config_error().
 *
 * Status values mirror the CLI exit codes: 2 for configuration problems,
 * 3 for data problems.
 */
#ifndef FUSIONBENCH_H
#define FUSIONBENCH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
    FB_OK = 0,
    FB_ERROR = 1,        /* unexpected internal failure */
    FB_CONFIG_ERROR = 2, /* bad key, value, or inconsistent settings */
    FB_DATA_ERROR = 3    /* missing/corrupt files, infeasible corpus */
} fb_status;

typedef struct fb_config fb_config;
typedef struct fb_report fb_report;

const char *fb_version(void);

fb_config *fb_config_new(void);
void fb_config_free(fb_config *cfg);

/* Load "key = value" lines from a file or a string; later calls override. */
fb_status fb_config_load_file(fb_config *cfg, const char *path);
fb_status fb_config_parse(fb_config *cfg, const char *text);
fb_status fb_config_set(fb_config *cfg, const char *key, const char *value);

/* Message for the most recent failing call on this handle ("" if none). */
const char *fb_config_error(const fb_config *cfg);

/* Run the configured pipeline. On FB_OK the caller owns *out_report. */
fb_status fb_run(fb_config *cfg, fb_report **out_report);

/* One run per value with everything else fixed; param is "pca_k" or
 * "gabor_kernel". The report's text is the two-column sweep table. */
fb_status fb_sweep(fb_config *cfg, const char *param, const int *values, size_t n_values,
                   fb_report **out_report);

/* Generate the configured synthetic corpus and write PGM files plus a
 * manifest at manifest_path. */
fb_status fb_synth_write(fb_config *cfg, const char *manifest_path);

/* Report accessors; the returned strings live as long as the report. */
const char *fb_report_text(const fb_report *report);
const char *fb_report_json(const fb_report *report);
double fb_report_accuracy(const fb_report *report); /* percent; -1 for sweeps */
void fb_report_free(fb_report *report);

#ifdef __cplusplus
}
#endif

#endif /* FUSIONBENCH_H */

#include "core/pipeline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "core/classifiers.hpp"
#include "core/combiners.hpp"
#include "core/error.hpp"
#include "core/pca.hpp"
#include "core/rng.hpp"

namespace fusion {

namespace {

struct SampleFeatures {
    FeatureVector raw;
    FeatureVector radial;
    FeatureVector reduced; // PCA-projected gabor
};

enum class TrioKind { ExemplarNn, Centroid, AvgDist, CentroidRatio };

TrioKind trio_for_rule(const std::string& rule) {
    if (rule == "h3") return TrioKind::Centroid;
    if (rule == "h4") return TrioKind::AvgDist;
    if (rule == "h5") return TrioKind::CentroidRatio;
    return TrioKind::ExemplarNn; // h1, h2 and every surveyed combiner
}

const char* trio_member_name(TrioKind kind, int i) {
    static const char* nn[] = {"raw-nn", "radial-nn", "gabor-pca-nn"};
    static const char* centroid[] = {"raw-centroid", "radial-centroid", "gabor-pca-centroid"};
    static const char* avg[] = {"raw-avgdist", "radial-avgdist", "gabor-pca-avgdist"};
    static const char* ratio[] = {"raw-centroid-ratio", "radial-centroid-ratio",
                                  "gabor-pca-centroid-ratio"};
    switch (kind) {
        case TrioKind::Centroid: return centroid[i];
        case TrioKind::AvgDist: return avg[i];
        case TrioKind::CentroidRatio: return ratio[i];
        default: return nn[i];
    }
}

double percent(std::size_t correct, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

// Per-classifier posterior row from per-class nearest-exemplar distances:
// p_k proportional to 1 / (d_k + eps). The row argmax coincides with the
// NN decision, so hardening these posteriors reproduces the base votes.
std::vector<double> posteriors_from_distances(const std::vector<double>& class_distances) {
    std::vector<double> p(class_distances.size());
    double total = 0.0;
    for (std::size_t k = 0; k < class_distances.size(); ++k) {
        p[k] = 1.0 / (class_distances[k] + kDistanceEpsilon);
        total += p[k];
    }
    for (double& v : p) v /= total;
    return p;
}

struct PreparedData {
    int class_count = 0;
    std::vector<int> class_labels;
    SplitPlan split;
    std::map<int, SampleFeatures> features; // by manifest record id
    std::map<int, int> dense_label;         // manifest label -> 0..M-1
    int pca_components_effective = 0;
};

const FeatureVector& feature_of(const PreparedData& data, int id, int classifier) {
    const SampleFeatures& f = data.features.at(id);
    switch (classifier) {
        case 0: return f.raw;
        case 1: return f.radial;
        default: return f.reduced;
    }
}

PreparedData prepare(const RunConfig& cfg, const Corpus& corpus) {
    PreparedData data;
    const auto plans = plan_selection(corpus.manifest, cfg.min_samples);
    if (plans.empty())
        raise(ErrorCode::DataError, "no class reaches the eligibility threshold");
    for (const ClassPlan& plan : plans) {
        data.dense_label[plan.label] = static_cast<int>(data.class_labels.size());
        data.class_labels.push_back(plan.label);
    }
    data.class_count = static_cast<int>(data.class_labels.size());
    data.split = draw_samples(corpus.manifest, plans, cfg.seed);

    std::vector<int> used_ids;
    for (const auto* part : {&data.split.train, &data.split.test, &data.split.validation})
        for (const SplitEntry& e : *part) used_ids.push_back(e.id);
    std::sort(used_ids.begin(), used_ids.end());

    const GaborBank bank = default_gabor_bank(cfg.gabor_kernel_size, cfg.gabor_omega, cfg.gabor_sigma);
    std::map<int, FeatureVector> gabor;
    for (int id : used_ids) {
        const BinaryImage& img = corpus.images[static_cast<std::size_t>(id)];
        SampleFeatures f;
        f.raw = raw_feature(img);
        f.radial = radial_feature(img);
        gabor.emplace(id, gabor_feature(img, bank));
        data.features.emplace(id, std::move(f));
    }

    // PCA is fit on the training gabor features only, then applied to all.
    const auto gabor_dim = gabor.begin()->second.dim();
    Eigen::MatrixXd train(static_cast<Eigen::Index>(data.split.train.size()),
                          static_cast<Eigen::Index>(gabor_dim));
    for (std::size_t r = 0; r < data.split.train.size(); ++r) {
        const auto& values = gabor.at(data.split.train[r].id).values;
        for (std::size_t c = 0; c < gabor_dim; ++c)
            train(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[c];
    }
    const int max_k = static_cast<int>(
        std::min<Eigen::Index>(train.rows() - 1, static_cast<Eigen::Index>(gabor_dim)));
    data.pca_components_effective = std::min(cfg.pca_components, max_k);
    const PcaModel pca = pca_fit(train, data.pca_components_effective);

    for (int id : used_ids) {
        const auto& values = gabor.at(id).values;
        const Eigen::VectorXd projected = pca_project(
            pca, Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size())));
        FeatureVector reduced;
        reduced.kind = FeatureKind::PcaReduced;
        reduced.values.assign(projected.data(), projected.data() + projected.size());
        data.features.at(id).reduced = std::move(reduced);
    }
    return data;
}

std::vector<LabeledSample> training_set(const PreparedData& data, int classifier) {
    std::vector<LabeledSample> out;
    out.reserve(data.split.train.size());
    for (const SplitEntry& e : data.split.train) {
        LabeledSample s;
        s.features = feature_of(data, e.id, classifier);
        s.label = data.dense_label.at(e.label);
        s.book = e.book;
        s.id = e.id;
        out.push_back(std::move(s));
    }
    return out;
}

struct FittedTrio {
    TrioKind kind = TrioKind::ExemplarNn;
    std::array<ExemplarModel, kClassifierCount> exemplar;
    std::array<CentroidModel, kClassifierCount> centroid;
};

FittedTrio fit_trio(const PreparedData& data, TrioKind kind) {
    FittedTrio trio;
    trio.kind = kind;
    for (int i = 0; i < kClassifierCount; ++i) {
        if (kind == TrioKind::ExemplarNn)
            trio.exemplar[static_cast<std::size_t>(i)] = fit_exemplar(training_set(data, i));
        else
            trio.centroid[static_cast<std::size_t>(i)] = fit_centroid(training_set(data, i));
    }
    return trio;
}

int trio_predict(const FittedTrio& trio, const PreparedData& data, int id, int classifier) {
    const FeatureVector& q = feature_of(data, id, classifier);
    switch (trio.kind) {
        case TrioKind::ExemplarNn:
            return nn_classify(trio.exemplar[static_cast<std::size_t>(classifier)], q).label;
        case TrioKind::Centroid:
        case TrioKind::CentroidRatio:
            return centroid_classify(trio.centroid[static_cast<std::size_t>(classifier)], q).first;
        case TrioKind::AvgDist:
            return avgdist_classify(trio.centroid[static_cast<std::size_t>(classifier)], q);
    }
    return 0;
}

} // namespace

AccuracyAccount filtered_accuracy(std::span<const SampleRow> rows) {
    AccuracyAccount account;
    for (const SampleRow& row : rows) {
        const bool considered =
            std::any_of(row.predictions.begin(), row.predictions.end(),
                        [&](int pred) { return pred == row.actual; });
        if (considered) {
            ++account.considered;
            if (row.fused == row.actual) ++account.correct;
        } else {
            account.discarded.push_back(row.index);
        }
    }
    std::sort(account.discarded.begin(), account.discarded.end());
    account.accuracy_percent = percent(account.correct, account.considered);
    return account;
}

RunReport run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    const Corpus corpus = cfg.manifest_path.empty()
                              ? synth_corpus(cfg.synth_classes, cfg.synth_per_class,
                                             cfg.synth_noise, cfg.seed)
                              : load_corpus(load_manifest_file(cfg.manifest_path),
                                            cfg.binarize_threshold);
    const PreparedData data = prepare(cfg, corpus);
    const int M = data.class_count;
    const std::string& rule = cfg.hypothesis;

    if (rule == "ds" && M > 64)
        raise(ErrorCode::ConfigError, "ds: at most 64 classes (bitmask frame)");
    if (rule == "adaboost" && M != 2)
        raise(ErrorCode::ConfigError, "adaboost: binary rule, corpus must have exactly 2 classes");

    const FittedTrio trio = fit_trio(data, trio_for_rule(rule));

    // Exemplar models always back the posterior construction for the
    // surveyed measurement-level combiners.
    std::array<ExemplarModel, kClassifierCount> nn_models;
    if (trio.kind == TrioKind::ExemplarNn)
        nn_models = trio.exemplar;
    else
        for (int i = 0; i < kClassifierCount; ++i)
            nn_models[static_cast<std::size_t>(i)] = fit_exemplar(training_set(data, i));

    RunReport report;
    report.rule = rule;
    report.seed = cfg.seed;
    report.rng_name = kRngName;
    report.class_count = M;
    report.class_labels = data.class_labels;
    report.confidence_split = cfg.confidence_split;
    report.pca_components_effective = data.pca_components_effective;
    report.gabor_kernel_size = cfg.gabor_kernel_size;

    const std::vector<SplitEntry>& conf_split =
        cfg.confidence_split == "train" ? data.split.train : data.split.test;

    // Per-classifier predictions on the confidence split and validation.
    std::array<std::vector<int>, kClassifierCount> split_preds;
    std::vector<int> split_truths;
    for (const SplitEntry& e : conf_split) split_truths.push_back(data.dense_label.at(e.label));
    for (int i = 0; i < kClassifierCount; ++i)
        for (const SplitEntry& e : conf_split)
            split_preds[static_cast<std::size_t>(i)].push_back(trio_predict(trio, data, e.id, i));

    std::array<std::vector<int>, kClassifierCount> val_preds;
    std::vector<int> val_truths;
    for (const SplitEntry& e : data.split.validation)
        val_truths.push_back(data.dense_label.at(e.label));
    for (int i = 0; i < kClassifierCount; ++i)
        for (const SplitEntry& e : data.split.validation)
            val_preds[static_cast<std::size_t>(i)].push_back(trio_predict(trio, data, e.id, i));

    for (int i = 0; i < kClassifierCount; ++i) {
        ClassifierBlock& block = report.classifiers[static_cast<std::size_t>(i)];
        block.name = trio_member_name(trio.kind, i);
        block.confusion = build_confusion(split_preds[static_cast<std::size_t>(i)], split_truths, M);
        std::size_t ok = 0;
        for (std::size_t s = 0; s < split_truths.size(); ++s)
            if (split_preds[static_cast<std::size_t>(i)][s] == split_truths[s]) ++ok;
        block.split_accuracy = percent(ok, split_truths.size());
        ok = 0;
        for (std::size_t s = 0; s < val_truths.size(); ++s)
            if (val_preds[static_cast<std::size_t>(i)][s] == val_truths[s]) ++ok;
        block.validation_accuracy = percent(ok, val_truths.size());
    }

    // Rule-specific shared state.
    const bool uses_confidence_matrix = rule == "h1" || rule == "h3" || rule == "h4";
    if (uses_confidence_matrix) {
        std::vector<std::vector<double>> columns;
        for (int i = 0; i < kClassifierCount; ++i)
            columns.push_back(
                confidence_from_confusion(report.classifiers[static_cast<std::size_t>(i)].confusion));
        report.confidence =
            confidence_matrix_from_columns(columns, ConfidenceSource::ConfusionDerived);
    }
    if (rule == "h2") {
        for (std::size_t s = 0; s < conf_split.size(); ++s) {
            TestSampleConfidence tc;
            tc.index = static_cast<int>(s);
            for (int i = 0; i < kClassifierCount; ++i) {
                const NnResult r = nn_classify(nn_models[static_cast<std::size_t>(i)],
                                               feature_of(data, conf_split[s].id, i));
                tc.confidences[static_cast<std::size_t>(i)] = margin_confidence(r.dis1, r.dis2);
            }
            report.test_confidences.push_back(tc);
        }
    }

    std::array<ClassifierReliability, kClassifierCount> reliabilities;
    if (rule == "ds") {
        for (int i = 0; i < kClassifierCount; ++i) {
            std::size_t ok = 0;
            for (std::size_t s = 0; s < split_truths.size(); ++s)
                if (split_preds[static_cast<std::size_t>(i)][s] == split_truths[s]) ++ok;
            double er = split_truths.empty()
                            ? 0.0
                            : static_cast<double>(ok) / static_cast<double>(split_truths.size());
            double es = split_truths.empty() ? 0.0 : 1.0 - er;
            // Leave a sliver of mass on Theta so that two certain but
            // disagreeing classifiers cannot reach total conflict.
            const double sum = er + es;
            if (sum >= 1.0) {
                const double scale = (1.0 - 1e-6) / sum;
                er *= scale;
                es *= scale;
            }
            reliabilities[static_cast<std::size_t>(i)] = {er, es};
        }
    }

    AdaBoostModel boost;
    if (rule == "adaboost") {
        std::vector<BinarySample> train;
        for (const SplitEntry& e : data.split.train) {
            BinarySample s;
            s.x = feature_of(data, e.id, 0).values; // raw pixels
            s.y = data.dense_label.at(e.label) == 1 ? 1 : -1;
            train.push_back(std::move(s));
        }
        boost = adaboost_train(train, cfg.adaboost_rounds, decision_stump_learner());
    }

    std::vector<BagPredictor> bag_predictors;
    if (rule == "bagging") {
        const auto base = training_set(data, 0); // raw pixels
        const BagLearner learner = [](const std::vector<LabeledSample>& bag) -> BagPredictor {
            auto model = std::make_shared<CentroidModel>(fit_centroid(bag));
            return [model](const FeatureVector& q) { return centroid_classify(*model, q).first; };
        };
        for (int b = 0; b < cfg.bagging_bags; ++b) {
            const auto indices =
                bootstrap_sample(base.size(), derive_seed(cfg.seed, static_cast<std::uint64_t>(b)));
            std::vector<LabeledSample> bag;
            bag.reserve(indices.size());
            for (std::size_t idx : indices) bag.push_back(base[idx]);
            bag_predictors.push_back(learner(bag));
        }
    }

    // Fuse every validation sample.
    for (std::size_t s = 0; s < data.split.validation.size(); ++s) {
        const SplitEntry& entry = data.split.validation[s];
        SampleRow row;
        row.index = static_cast<int>(s);
        row.dataset_id = entry.id;
        row.actual = val_truths[s];
        for (int i = 0; i < kClassifierCount; ++i)
            row.predictions[static_cast<std::size_t>(i)] = val_preds[static_cast<std::size_t>(i)][s];

        EnsembleDecision decision;
        if (rule == "h1" || rule == "h3" || rule == "h4") {
            decision = hypothesis1(row.predictions, report.confidence);
        } else if (rule == "h2") {
            std::array<double, kClassifierCount> confs{};
            for (int i = 0; i < kClassifierCount; ++i) {
                const NnResult r = nn_classify(nn_models[static_cast<std::size_t>(i)],
                                               feature_of(data, entry.id, i));
                confs[static_cast<std::size_t>(i)] = margin_confidence(r.dis1, r.dis2);
            }
            row.confidences = confs;
            decision = hypothesis2(row.predictions, confs);
        } else if (rule == "h5") {
            std::array<double, kClassifierCount> confs{};
            for (int i = 0; i < kClassifierCount; ++i) {
                const auto [label, conf] = centroid_ratio_confidence(
                    trio.centroid[static_cast<std::size_t>(i)], feature_of(data, entry.id, i));
                row.predictions[static_cast<std::size_t>(i)] = label;
                confs[static_cast<std::size_t>(i)] = conf;
            }
            row.confidences = confs;
            decision = hypothesis5(row.predictions, confs);
            row.result_score = decision.scores.at(decision.label);
        } else if (rule == "ds") {
            std::vector<MassFunction> masses;
            for (int i = 0; i < kClassifierCount; ++i)
                masses.push_back(ds_from_evidence(row.predictions[static_cast<std::size_t>(i)],
                                                  reliabilities[static_cast<std::size_t>(i)], M));
            try {
                decision = ds_decide(masses);
            } catch (const Error& err) {
                if (err.code() != ErrorCode::TotalConflict) throw;
                decision = EnsembleDecision::reject(M); // conflicting evidence, abstain
            }
        } else if (rule == "adaboost") {
            decision.label = boost.predict(feature_of(data, entry.id, 0).values) == 1 ? 1 : 0;
        } else if (rule == "bagging") {
            std::map<int, int> tallies;
            for (const BagPredictor& predict : bag_predictors)
                ++tallies[predict(feature_of(data, entry.id, 0))];
            int best_label = tallies.begin()->first, best_votes = tallies.begin()->second;
            for (const auto& [label, votes] : tallies)
                if (votes > best_votes) {
                    best_votes = votes;
                    best_label = label;
                }
            decision.label = best_label;
        } else if (rule.rfind("vote-", 0) == 0) {
            const VoteVariant variant = rule == "vote-unanimous" ? VoteVariant::Unanimous
                                        : rule == "vote-noconflict" ? VoteVariant::NoConflict
                                                                    : VoteVariant::Margin;
            decision = vote(variant, row.predictions, M, cfg.vote_alpha);
        } else { // measurement-level combiners: avg-bayes and the fixed rules
            PosteriorMatrix posteriors(kClassifierCount, M);
            for (int i = 0; i < kClassifierCount; ++i) {
                const FeatureVector& q = feature_of(data, entry.id, i);
                std::vector<double> best(static_cast<std::size_t>(M),
                                         std::numeric_limits<double>::infinity());
                for (const LabeledSample& t : nn_models[static_cast<std::size_t>(i)].samples)
                    best[static_cast<std::size_t>(t.label)] =
                        std::min(best[static_cast<std::size_t>(t.label)],
                                 euclidean_distance(t.features.values, q.values));
                const auto p = posteriors_from_distances(best);
                for (int k = 0; k < M; ++k) posteriors.at(i, k) = p[static_cast<std::size_t>(k)];
            }
            if (rule == "avg-bayes") {
                decision = averaged_bayes(posteriors);
            } else {
                const auto priors = uniform_priors(M);
                decision = fixed_rule(fixed_rule_from_name(rule), posteriors, priors);
            }
        }

        row.fused = decision.label;
        report.rows.push_back(std::move(row));
    }

    report.account = filtered_accuracy(report.rows);
    for (SampleRow& row : report.rows)
        row.considered = std::any_of(row.predictions.begin(), row.predictions.end(),
                                     [&](int pred) { return pred == row.actual; });
    return report;
}

SweepTable sweep(const RunConfig& cfg, const std::string& parameter, std::span<const int> values) {
    if (parameter != "pca_k" && parameter != "gabor_kernel")
        raise(ErrorCode::ConfigError, "sweep: parameter must be pca_k or gabor_kernel");
    if (values.empty()) raise(ErrorCode::ConfigError, "sweep: no values given");
    SweepTable table;
    table.parameter = parameter;
    for (int value : values) {
        RunConfig run_cfg = cfg;
        if (parameter == "pca_k")
            run_cfg.pca_components = value;
        else
            run_cfg.gabor_kernel_size = value;
        const RunReport report = run_pipeline(run_cfg);
        table.rows.push_back({value, report.classifiers[2].validation_accuracy});
    }
    return table;
}

} // namespace fusion

#include "core/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace fusion {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr double kConflictTolerance = 1e-12;

// argmax over a label->score map, ties to the lowest label (map iteration
// is ascending, so strict comparison suffices).
EnsembleDecision pick_best(std::map<int, double> scores) {
    EnsembleDecision decision;
    decision.label = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [label, score] : scores) {
        if (score > best) {
            best = score;
            decision.label = label;
        }
    }
    decision.scores = std::move(scores);
    return decision;
}

EnsembleDecision weighted_agreement(std::span<const int> preds, const ConfidenceMatrix& conf) {
    if (preds.empty()) raise(ErrorCode::LengthMismatch, "hypothesis: no predictions");
    std::map<int, double> scores;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int label = preds[i];
        if (label < 0 || label >= conf.class_count)
            raise(ErrorCode::LabelOutOfRange, "hypothesis: predicted label out of range");
        scores[label] += conf.at(label, static_cast<int>(i));
    }
    return pick_best(std::move(scores));
}

} // namespace

void PosteriorMatrix::validate() const {
    for (int i = 0; i < classifier_count; ++i) {
        double sum = 0.0;
        for (int k = 0; k < class_count; ++k) {
            const double v = at(i, k);
            if (!(v >= 0.0 && v <= 1.0))
                raise(ErrorCode::DegenerateInput, "PosteriorMatrix: entry outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            raise(ErrorCode::DegenerateInput, "PosteriorMatrix: row does not sum to 1");
    }
}

double binomial_ensemble_error(double epsilon, int K) {
    if (K < 1 || K % 2 == 0)
        raise(ErrorCode::InvalidK, "binomial_ensemble_error: K must be odd and >= 1");
    if (epsilon < 0.0 || epsilon > 1.0)
        raise(ErrorCode::DegenerateInput, "binomial_ensemble_error: epsilon outside [0,1]");
    if (epsilon == 0.0) return 0.0;
    if (epsilon == 1.0) return 1.0;
    double total = 0.0;
    for (int i = (K + 1) / 2; i <= K; ++i) {
        const double log_comb =
            std::lgamma(K + 1.0) - std::lgamma(i + 1.0) - std::lgamma(K - i + 1.0);
        total += std::exp(log_comb + i * std::log(epsilon) + (K - i) * std::log1p(-epsilon));
    }
    return total;
}

EnsembleDecision hypothesis1(std::span<const int> preds, const ConfidenceMatrix& conf) {
    return weighted_agreement(preds, conf);
}

EnsembleDecision hypothesis2(std::span<const int> preds, std::span<const double> sample_conf) {
    if (preds.size() != sample_conf.size() || preds.empty())
        raise(ErrorCode::LengthMismatch, "hypothesis2: preds/confidence length mismatch");
    std::size_t best = 0;
    for (std::size_t i = 1; i < preds.size(); ++i)
        if (sample_conf[i] > sample_conf[best]) best = i;
    EnsembleDecision decision;
    decision.label = preds[best];
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto [it, inserted] = decision.scores.emplace(preds[i], sample_conf[i]);
        if (!inserted) it->second = std::max(it->second, sample_conf[i]);
    }
    return decision;
}

EnsembleDecision hypothesis3(std::span<const int> preds, const ConfidenceMatrix& conf) {
    return weighted_agreement(preds, conf);
}

EnsembleDecision hypothesis4(std::span<const int> preds, const ConfidenceMatrix& conf) {
    return weighted_agreement(preds, conf);
}

EnsembleDecision hypothesis5(std::span<const int> preds, std::span<const double> confs) {
    if (preds.size() != confs.size() || preds.empty())
        raise(ErrorCode::LengthMismatch, "hypothesis5: preds/confidence length mismatch");
    std::map<int, double> scores;
    for (std::size_t i = 0; i < preds.size(); ++i) scores[preds[i]] += confs[i];
    return pick_best(std::move(scores));
}

FixedRule fixed_rule_from_name(const std::string& name) {
    if (name == "product") return FixedRule::Product;
    if (name == "sum") return FixedRule::Sum;
    if (name == "max") return FixedRule::Max;
    if (name == "min") return FixedRule::Min;
    if (name == "mean") return FixedRule::Mean;
    if (name == "median") return FixedRule::Median;
    raise(ErrorCode::ConfigError, "unknown fixed rule: " + name);
}

std::vector<double> uniform_priors(int class_count) {
    return std::vector<double>(static_cast<std::size_t>(class_count), 1.0 / class_count);
}

EnsembleDecision fixed_rule(FixedRule rule, const PosteriorMatrix& posteriors,
                            std::span<const double> priors) {
    posteriors.validate();
    const int R = posteriors.classifier_count, M = posteriors.class_count;
    if (static_cast<int>(priors.size()) != M)
        raise(ErrorCode::InvalidPriors, "fixed_rule: priors size mismatch");
    double prior_sum = 0.0;
    for (double p : priors) prior_sum += p;
    if (std::abs(prior_sum - 1.0) > kRowSumTolerance)
        raise(ErrorCode::InvalidPriors, "fixed_rule: priors must sum to 1");

    std::map<int, double> scores;
    std::vector<double> column(static_cast<std::size_t>(R));
    for (int k = 0; k < M; ++k) {
        for (int i = 0; i < R; ++i) column[static_cast<std::size_t>(i)] = posteriors.at(i, k);
        double score = 0.0;
        switch (rule) {
            case FixedRule::Product: {
                double prod = 1.0;
                for (double v : column) prod *= v;
                // A zero prior annihilates the class regardless of evidence.
                score = priors[k] > 0.0 ? std::pow(priors[k], -(R - 1)) * prod : 0.0;
                break;
            }
            case FixedRule::Sum: {
                double sum = 0.0;
                for (double v : column) sum += v;
                score = (1.0 - R) * priors[k] + sum;
                break;
            }
            case FixedRule::Max:
                score = *std::max_element(column.begin(), column.end());
                break;
            case FixedRule::Min:
                score = *std::min_element(column.begin(), column.end());
                break;
            case FixedRule::Mean: {
                double sum = 0.0;
                for (double v : column) sum += v;
                score = sum / R;
                break;
            }
            case FixedRule::Median: {
                std::sort(column.begin(), column.end());
                score = R % 2 == 1
                            ? column[static_cast<std::size_t>(R / 2)]
                            : 0.5 * (column[static_cast<std::size_t>(R / 2 - 1)] +
                                     column[static_cast<std::size_t>(R / 2)]);
                break;
            }
        }
        scores[k] = score;
    }
    return pick_best(std::move(scores));
}

std::vector<std::uint8_t> harden(const PosteriorMatrix& posteriors) {
    posteriors.validate();
    const int R = posteriors.classifier_count, M = posteriors.class_count;
    std::vector<std::uint8_t> delta(static_cast<std::size_t>(R) * M, 0);
    for (int i = 0; i < R; ++i) {
        int best = 0;
        for (int k = 1; k < M; ++k)
            if (posteriors.at(i, k) > posteriors.at(i, best)) best = k;
        delta[static_cast<std::size_t>(i) * M + best] = 1;
    }
    return delta;
}

EnsembleDecision vote(VoteVariant variant, std::span<const int> preds, int class_count,
                      double alpha) {
    if (variant == VoteVariant::Margin && !(alpha > 0.0 && alpha <= 1.0))
        raise(ErrorCode::InvalidAlpha, "vote: alpha must lie in (0, 1]");
    const int K = static_cast<int>(preds.size());
    std::map<int, int> tallies;
    for (int label : preds) {
        if (label < 0 || label > class_count)
            raise(ErrorCode::LabelOutOfRange, "vote: label out of range");
        if (label < class_count) ++tallies[label]; // REJECT votes carry no label
    }

    switch (variant) {
        case VoteVariant::Unanimous: {
            if (tallies.size() == 1 && tallies.begin()->second == K) {
                EnsembleDecision d;
                d.label = tallies.begin()->first;
                d.scores[d.label] = tallies.begin()->second;
                return d;
            }
            return EnsembleDecision::reject(class_count);
        }
        case VoteVariant::NoConflict: {
            if (tallies.size() == 1) { // >= 1 vote and no dissent among non-rejecting
                EnsembleDecision d;
                d.label = tallies.begin()->first;
                d.scores[d.label] = tallies.begin()->second;
                return d;
            }
            return EnsembleDecision::reject(class_count);
        }
        case VoteVariant::Margin: {
            if (tallies.empty()) return EnsembleDecision::reject(class_count);
            int best_label = -1, max1 = 0, max2 = 0;
            for (const auto& [label, count] : tallies) {
                if (count > max1) {
                    max2 = max1;
                    max1 = count;
                    best_label = label;
                } else if (count > max2) {
                    max2 = count;
                }
            }
            if (static_cast<double>(max1 - max2) >= alpha * K) {
                EnsembleDecision d;
                d.label = best_label;
                for (const auto& [label, count] : tallies) d.scores[label] = count;
                return d;
            }
            return EnsembleDecision::reject(class_count);
        }
    }
    return EnsembleDecision::reject(class_count);
}

EnsembleDecision averaged_bayes(const PosteriorMatrix& posteriors) {
    posteriors.validate();
    const int R = posteriors.classifier_count, M = posteriors.class_count;
    std::map<int, double> scores;
    for (int k = 0; k < M; ++k) {
        double sum = 0.0;
        for (int i = 0; i < R; ++i) sum += posteriors.at(i, k);
        scores[k] = sum / R;
    }
    return pick_best(std::move(scores));
}

MassFunction::MassFunction(int frame_size) : frame_size_(frame_size) {
    if (frame_size < 1 || frame_size > 64)
        raise(ErrorCode::DegenerateInput, "MassFunction: frame size must be in 1..64");
    theta_ = frame_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << frame_size) - 1;
}

MassFunction MassFunction::vacuous(int frame_size) {
    MassFunction m(frame_size);
    m.set(m.theta(), 1.0);
    return m;
}

void MassFunction::set(std::uint64_t subset, double mass) {
    if (mass < 0.0) raise(ErrorCode::DegenerateInput, "MassFunction: negative mass");
    if (mass == 0.0) { // zero mass means "not a focal element", any subset
        masses_.erase(subset);
        return;
    }
    if (subset == 0 || (subset & ~theta_) != 0)
        raise(ErrorCode::DegenerateInput, "MassFunction: focal element outside the frame");
    masses_[subset] = mass;
}

double MassFunction::mass(std::uint64_t subset) const {
    auto it = masses_.find(subset);
    return it == masses_.end() ? 0.0 : it->second;
}

double MassFunction::belief(std::uint64_t subset) const {
    double total = 0.0;
    for (const auto& [focal, mass] : masses_)
        if ((focal & ~subset) == 0) total += mass;
    return total;
}

double MassFunction::total_mass() const {
    double total = 0.0;
    for (const auto& [focal, mass] : masses_) total += mass;
    return total;
}

void MassFunction::check_normalized() const {
    if (std::abs(total_mass() - 1.0) > kRowSumTolerance)
        raise(ErrorCode::DegenerateInput, "MassFunction: masses must sum to 1");
}

MassFunction ds_combine(const MassFunction& m1, const MassFunction& m2) {
    if (m1.frame_size() != m2.frame_size())
        raise(ErrorCode::DimensionMismatch, "ds_combine: frames differ");
    m1.check_normalized();
    m2.check_normalized();

    std::map<std::uint64_t, double> raw;
    double non_conflict = 0.0;
    for (const auto& [x, mx] : m1.focal_elements()) {
        for (const auto& [y, my] : m2.focal_elements()) {
            const std::uint64_t inter = x & y;
            const double product = mx * my;
            if (inter == 0) continue;
            raw[inter] += product;
            non_conflict += product;
        }
    }
    if (non_conflict <= kConflictTolerance)
        raise(ErrorCode::TotalConflict, "ds_combine: evidences are in total conflict");

    MassFunction out(m1.frame_size());
    for (const auto& [subset, mass] : raw) out.set(subset, mass / non_conflict);
    return out;
}

void ClassifierReliability::validate() const {
    if (recognition_rate < 0.0 || recognition_rate > 1.0 || substitution_rate < 0.0 ||
        substitution_rate > 1.0 || recognition_rate + substitution_rate > 1.0)
        raise(ErrorCode::InvalidReliability,
              "ClassifierReliability: rates must be in [0,1] with er + es <= 1");
}

MassFunction ds_from_evidence(int evidence_label, const ClassifierReliability& rel,
                              int class_count) {
    rel.validate();
    if (evidence_label < 0 || evidence_label > class_count)
        raise(ErrorCode::LabelOutOfRange, "ds_from_evidence: label out of range");
    if (evidence_label == class_count) return MassFunction::vacuous(class_count); // REJECT

    MassFunction m(class_count);
    const std::uint64_t a = MassFunction::singleton(evidence_label);
    m.set(a, rel.recognition_rate);
    m.set(m.theta() & ~a, rel.substitution_rate);
    m.set(m.theta(), 1.0 - rel.recognition_rate - rel.substitution_rate);
    return m;
}

EnsembleDecision ds_decide(std::span<const MassFunction> masses) {
    if (masses.empty()) raise(ErrorCode::LengthMismatch, "ds_decide: no evidences");
    MassFunction combined = masses.front();
    for (std::size_t i = 1; i < masses.size(); ++i) combined = ds_combine(combined, masses[i]);

    std::map<int, double> scores;
    for (int label = 0; label < combined.frame_size(); ++label)
        scores[label] = combined.belief(MassFunction::singleton(label));
    return pick_best(std::move(scores));
}

double adaboost_alpha(double epsilon) {
    constexpr double kEpsilonMin = 1e-10;
    const double e = std::clamp(epsilon, kEpsilonMin, 1.0 - kEpsilonMin);
    return 0.5 * std::log((1.0 - e) / e);
}

double AdaBoostModel::score(std::span<const double> x) const {
    double sum = 0.0;
    for (const AdaBoostRound& round : rounds) sum += round.alpha * round.hypothesis.predict(x);
    return sum;
}

int AdaBoostModel::predict(std::span<const double> x) const {
    return score(x) >= 0.0 ? 1 : -1;
}

AdaBoostModel adaboost_train(std::span<const BinarySample> samples, int rounds,
                             const WeakLearner& learner) {
    if (samples.empty()) raise(ErrorCode::DegenerateInput, "adaboost_train: no samples");
    for (const BinarySample& s : samples)
        if (s.y != 1 && s.y != -1)
            raise(ErrorCode::DegenerateInput, "adaboost_train: labels must be -1 or +1");

    const std::size_t n = samples.size();
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));

    AdaBoostModel model;
    for (int t = 0; t < rounds; ++t) {
        model.weight_history.push_back(weights);
        WeakHypothesis h = learner(samples, weights);
        if (h.weighted_error >= 0.5) {
            // One retry; a learner that cannot beat chance twice is broken.
            h = learner(samples, weights);
            if (h.weighted_error >= 0.5)
                raise(ErrorCode::DegenerateWeakLearner,
                      "adaboost_train: weak learner not better than chance");
        }
        if (h.weighted_error <= 0.0) {
            // Perfect hypothesis: clamp alpha and stop training.
            model.rounds.push_back({std::move(h), adaboost_alpha(0.0)});
            break;
        }
        const double alpha = adaboost_alpha(h.weighted_error);
        double z = 0.0;
        std::vector<double> updated(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int hi = h.predict(samples[i].x);
            updated[i] = weights[i] * std::exp(-alpha * samples[i].y * hi);
            z += updated[i];
        }
        for (std::size_t i = 0; i < n; ++i) weights[i] = updated[i] / z;
        model.rounds.push_back({std::move(h), alpha});
    }
    return model;
}

WeakLearner decision_stump_learner() {
    return [](std::span<const BinarySample> samples, std::span<const double> weights) {
        const std::size_t dim = samples.front().x.size();
        double best_error = std::numeric_limits<double>::infinity();
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        int best_polarity = 1;

        std::vector<double> cuts;
        for (std::size_t f = 0; f < dim; ++f) {
            cuts.clear();
            for (const BinarySample& s : samples) cuts.push_back(s.x[f]);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            // Candidate thresholds: below the minimum and between neighbors.
            std::vector<double> thresholds;
            thresholds.push_back(cuts.front() - 1.0);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                thresholds.push_back(0.5 * (cuts[i] + cuts[i + 1]));
            for (double threshold : thresholds) {
                for (int polarity : {1, -1}) {
                    double error = 0.0;
                    for (std::size_t i = 0; i < samples.size(); ++i) {
                        const int pred = (samples[i].x[f] > threshold ? 1 : -1) * polarity;
                        if (pred != samples[i].y) error += weights[i];
                    }
                    if (error < best_error) {
                        best_error = error;
                        best_feature = f;
                        best_threshold = threshold;
                        best_polarity = polarity;
                    }
                }
            }
        }

        WeakHypothesis h;
        h.weighted_error = best_error;
        h.predict = [best_feature, best_threshold, best_polarity](std::span<const double> x) {
            return (x[best_feature] > best_threshold ? 1 : -1) * best_polarity;
        };
        return h;
    };
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed) {
    if (n < 1) raise(ErrorCode::DegenerateInput, "bootstrap_sample: n must be >= 1");
    Rng rng(seed);
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = static_cast<std::size_t>(rng.uniform_int(n));
    return indices;
}

int bagging_train_predict(const std::vector<LabeledSample>& samples, int bag_count,
                          const BagLearner& learner, const FeatureVector& q,
                          std::uint64_t seed) {
    if (bag_count < 1) raise(ErrorCode::DegenerateInput, "bagging: bag count must be >= 1");
    std::map<int, int> tallies;
    for (int b = 0; b < bag_count; ++b) {
        const auto indices = bootstrap_sample(samples.size(), derive_seed(seed, static_cast<std::uint64_t>(b)));
        std::vector<LabeledSample> bag;
        bag.reserve(indices.size());
        for (std::size_t idx : indices) bag.push_back(samples[idx]);
        tallies[learner(bag)(q)] += 1;
    }
    int best_label = tallies.begin()->first;
    int best_votes = tallies.begin()->second;
    for (const auto& [label, votes] : tallies) {
        if (votes > best_votes) {
            best_votes = votes;
            best_label = label;
        }
    }
    return best_label;
}

} // namespace fusion

#ifndef FUSION_CORE_COMBINERS_HPP
#define FUSION_CORE_COMBINERS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/classifiers.hpp"
#include "core/confidence.hpp"

namespace fusion {

/// Fused decision. label is a class index, or class_count (the REJECT
/// encoding) when the combiner abstains. scores holds the per-label
/// breakdown for every candidate the combiner weighed.
struct EnsembleDecision {
    int label = 0;
    std::map<int, double> scores;

    static EnsembleDecision reject(int class_count) {
        EnsembleDecision d;
        d.label = class_count;
        return d;
    }
    bool rejected(int class_count) const { return label == class_count; }
};

/// R classifiers x M classes soft outputs; entry (i, k) = P(w_k | x_i).
/// Rows must sum to 1 within 1e-9 with entries in [0, 1].
struct PosteriorMatrix {
    int classifier_count = 0;
    int class_count = 0;
    std::vector<double> p; // row-major R x M

    PosteriorMatrix() = default;
    PosteriorMatrix(int r, int m)
        : classifier_count(r), class_count(m), p(static_cast<std::size_t>(r) * m, 0.0) {}

    double at(int clf, int cls) const {
        return p[static_cast<std::size_t>(clf) * class_count + cls];
    }
    double& at(int clf, int cls) {
        return p[static_cast<std::size_t>(clf) * class_count + cls];
    }
    void validate() const; // throws DegenerateInput
};

/// Probability that a majority of K independent classifiers, each wrong
/// with rate epsilon, outvotes the truth. K must be odd (the majority
/// argument needs a strict majority).
double binomial_ensemble_error(double epsilon, int K);

/// Hypothesis 1/3/4 rule: each classifier votes for its predicted label
/// with weight conf[label][classifier]; agreeing votes add up; the best
/// scored predicted label wins, ties to the lowest label.
EnsembleDecision hypothesis1(std::span<const int> preds, const ConfidenceMatrix& conf);

/// Hypothesis 2: the classifier with the maximum per-sample confidence has
/// the final say; ties to the lowest classifier index.
EnsembleDecision hypothesis2(std::span<const int> preds, std::span<const double> sample_conf);

EnsembleDecision hypothesis3(std::span<const int> preds, const ConfidenceMatrix& conf);
EnsembleDecision hypothesis4(std::span<const int> preds, const ConfidenceMatrix& conf);

/// Hypothesis 5: like hypothesis1 but the weights are the per-sample
/// centroid-ratio confidences, no confusion matrix involved.
EnsembleDecision hypothesis5(std::span<const int> preds, std::span<const double> confs);

enum class FixedRule { Product, Sum, Max, Min, Mean, Median };

FixedRule fixed_rule_from_name(const std::string& name);

/// The Kittler et al. fixed rules. Product and sum use the prior-adjusted
/// forms; max/min/mean/median are the equal-prior simplifications. priors
/// must sum to 1 within 1e-9 (InvalidPriors otherwise).
EnsembleDecision fixed_rule(FixedRule rule, const PosteriorMatrix& posteriors,
                            std::span<const double> priors);

std::vector<double> uniform_priors(int class_count);

/// Row-wise argmax hardening: exactly one 1 per classifier row, ties to
/// the lowest class.
std::vector<std::uint8_t> harden(const PosteriorMatrix& posteriors); // R x M, row-major

enum class VoteVariant { Unanimous, NoConflict, Margin };

/// preds entries are labels or class_count (REJECT). alpha is used only by
/// the margin variant and must lie in (0, 1] there.
EnsembleDecision vote(VoteVariant variant, std::span<const int> preds, int class_count,
                      double alpha = 1.0);

/// Averaged Bayes: argmax of the across-classifier mean posterior. The
/// decision coincides with fixed_rule(Mean, ., uniform) on every input.
EnsembleDecision averaged_bayes(const PosteriorMatrix& posteriors);

/// Basic probability assignment over label subsets. Subsets are bitmasks
/// over at most 64 labels; the frame Theta is the full mask. Only focal
/// elements (positive mass) are stored.
class MassFunction {
public:
    MassFunction() = default;
    explicit MassFunction(int frame_size);

    static MassFunction vacuous(int frame_size); // all mass on Theta

    int frame_size() const { return frame_size_; }
    std::uint64_t theta() const { return theta_; }
    static std::uint64_t singleton(int label) { return std::uint64_t{1} << label; }

    void set(std::uint64_t subset, double mass); // drops zero masses
    double mass(std::uint64_t subset) const;
    const std::map<std::uint64_t, double>& focal_elements() const { return masses_; }

    /// Total mass of all focal elements contained in the given subset.
    double belief(std::uint64_t subset) const;

    double total_mass() const;
    void check_normalized() const; // throws DegenerateInput when off by > 1e-9

private:
    int frame_size_ = 0;
    std::uint64_t theta_ = 0;
    std::map<std::uint64_t, double> masses_;
};

/// Dempster's rule: m(A) = k * sum over X, Y with X i Y = A of m1(X)m2(Y),
/// k^-1 the non-conflicting mass. Throws TotalConflict when k^-1 vanishes
/// (within 1e-12).
MassFunction ds_combine(const MassFunction& m1, const MassFunction& m2);

struct ClassifierReliability {
    double recognition_rate = 0.0;  // epsilon_r
    double substitution_rate = 0.0; // epsilon_s

    void validate() const; // InvalidReliability when er + es > 1 or out of range
};

/// Evidence model: REJECT maps to the vacuous assignment; a label j yields
/// focal elements {A_j: er, not-A_j: es, Theta: 1 - er - es}.
MassFunction ds_from_evidence(int evidence_label, const ClassifierReliability& rel,
                              int class_count);

/// Left-fold combination of all evidences, then argmax of the singleton
/// beliefs; ties to the lowest label. TotalConflict propagates.
EnsembleDecision ds_decide(std::span<const MassFunction> masses);

// --- AdaBoost (binary labels in {-1, +1}) ---

struct BinarySample {
    std::vector<double> x;
    int y = 1; // -1 or +1
};

struct WeakHypothesis {
    std::function<int(std::span<const double>)> predict;
    double weighted_error = 0.0; // learner-reported epsilon_t
};

using WeakLearner =
    std::function<WeakHypothesis(std::span<const BinarySample>, std::span<const double>)>;

struct AdaBoostRound {
    WeakHypothesis hypothesis;
    double alpha = 0.0;
};

struct AdaBoostModel {
    std::vector<AdaBoostRound> rounds;
    std::vector<std::vector<double>> weight_history; // D_t used in each round

    double score(std::span<const double> x) const; // sum of alpha_t h_t(x)
    int predict(std::span<const double> x) const;  // sign, 0 counted as +1
};

/// alpha = ln((1-e)/e) / 2, with e clamped to [1e-10, 1 - 1e-10].
double adaboost_alpha(double epsilon);

/// Freund-Schapire AdaBoost: alpha_t = ln((1-e)/e)/2, multiplicative
/// exp(-alpha y h) reweighting with per-round normalization. epsilon_t = 0
/// clamps alpha at epsilon 1e-10 and stops (perfect weak learner);
/// epsilon_t >= 0.5 requests one replacement hypothesis, then aborts with
/// DegenerateWeakLearner.
AdaBoostModel adaboost_train(std::span<const BinarySample> samples, int rounds,
                             const WeakLearner& learner);

/// Axis-aligned decision stump learner minimizing weighted error, for use
/// as the AdaBoost weak learner.
WeakLearner decision_stump_learner();

/// n i.i.d. uniform draws from 0..n-1; deterministic for a fixed seed.
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed);

using BagPredictor = std::function<int(const FeatureVector&)>;
using BagLearner = std::function<BagPredictor(const std::vector<LabeledSample>&)>;

/// Train the base learner on B bootstrap bags (per-bag seeds derived from
/// the master seed) and predict by unweighted majority vote, ties to the
/// lowest label.
int bagging_train_predict(const std::vector<LabeledSample>& samples, int bag_count,
                          const BagLearner& learner, const FeatureVector& q,
                          std::uint64_t seed);

} // namespace fusion

#endif

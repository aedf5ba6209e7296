#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultpred/matrix.hpp"

namespace faultpred {

enum class LearnerKind { Logr, Ann, RbfnRan, RbfnKmc, RbfnFcm, Dtf };

std::string_view to_string(LearnerKind kind);
std::optional<LearnerKind> learner_kind_from_string(std::string_view name);

/// Scores at or above this threshold classify as faulty, corpus-wide.
inline constexpr double kDecisionThreshold = 0.5;

struct LogrParams {
    double tolerance = 1e-8;   // on log-likelihood change
    int max_iterations = 100;
    double separation_ridge = 1e-6;
};

struct AnnParams {
    int hidden_units = 0; // 0 = min(2p + 1, 20)
    std::vector<double> learning_rate_grid{0.5, 0.1, 0.05, 0.01};
    int epochs = 500;
    int cv_folds = 3; // internal CV that picks the learning constant
};

struct RbfnParams {
    int centers = 0;            // 0 = max(2, ceil(sqrt(n))) capped at 30
    double width_override = 0.0; // 0 = d_max / sqrt(2k) heuristic
    int epochs = 500;
    double learning_rate = 0.5;
    double fuzzifier = 2.0; // FCM variant only
};

struct DtfParams {
    int trees = 100;
    bool bootstrap = true;
    bool feature_subsample = true; // ceil(sqrt(p)) features per node
    int min_samples_split = 2;
};

/// Everything a trainer needs; behavior is a pure function of
/// (training data, params, seed).
struct LearnerSpec {
    LearnerKind kind = LearnerKind::Logr;
    std::uint64_t seed = 0;
    LogrParams logr{};
    AnnParams ann{};
    RbfnParams rbfn{};
    DtfParams dtf{};
};

class Classifier {
public:
    virtual ~Classifier() = default;

    /// Fault-proneness score in [0, 1] for one feature vector.
    virtual double score(std::span<const double> x) const = 0;

    virtual LearnerKind kind() const = 0;

    /// Versioned JSON document (kind, hyperparams, parameters).
    virtual std::string to_json() const = 0;
};

struct TrainedModel {
    LearnerKind kind{};
    std::shared_ptr<const Classifier> model;
    double training_accuracy = 0.0;
    double training_f_measure = 0.0;
    std::vector<std::string> warnings;

    double score(std::span<const double> x) const { return model->score(x); }
    bool predict(std::span<const double> x) const { return score(x) >= kDecisionThreshold; }
    std::string to_json() const;
};

/// Logistic regression fitted by iteratively reweighted least squares.
TrainedModel train_logr(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec);

/// One-hidden-layer sigmoid network trained by full-batch gradient descent
/// on MSE; the learning constant comes from an internal cross validation
/// over the spec's grid.
TrainedModel train_ann(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec);

/// Gaussian RBF network; spec.kind picks the center strategy (random
/// sample, k-means, or fuzzy c-means), output weights by gradient descent.
TrainedModel train_rbfn(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec);

/// Bootstrap forest of Gini-split decision trees; score is the faulty vote
/// fraction.
TrainedModel train_dtf(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec);

TrainedModel train_learner(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec);

std::shared_ptr<const Classifier> classifier_from_json(std::string_view text);
TrainedModel trained_model_from_json(std::string_view text);

/// Raw network pieces, exposed so the analytic gradient can be checked
/// against finite differences.
namespace ann_detail {

struct Topology {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t weight_count() const { return hidden * (inputs + 1) + hidden + 1; }
};

double forward(std::span<const double> weights, const Topology& topo, std::span<const double> x);
double mse(std::span<const double> weights, const Topology& topo, const Matrix& x,
           const std::vector<int>& y);
void mse_gradient(std::span<const double> weights, const Topology& topo, const Matrix& x,
                  const std::vector<int>& y, std::span<double> grad);

} // namespace ann_detail

/// Shared IRLS core (also used by the cost model's threshold regression).
struct LogisticFit {
    std::vector<double> beta; // intercept first
    bool separated = false;
    double log_likelihood = 0.0;
    int iterations = 0;
};

LogisticFit fit_logistic_irls(const Matrix& x, const std::vector<int>& y, double tolerance,
                              int max_iterations, double separation_ridge);

} // namespace faultpred

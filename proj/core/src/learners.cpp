#include "faultpred/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "faultpred/clustering.hpp"
#include "faultpred/confusion.hpp"
#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"
#include "stratified.hpp"

namespace faultpred {

using nlohmann::json;

std::string_view to_string(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::Logr: return "LOGR";
        case LearnerKind::Ann: return "ANN";
        case LearnerKind::RbfnRan: return "RBFN-RAN";
        case LearnerKind::RbfnKmc: return "RBFN-KMC";
        case LearnerKind::RbfnFcm: return "RBFN-FCM";
        case LearnerKind::Dtf: return "DTF";
    }
    return "?";
}

std::optional<LearnerKind> learner_kind_from_string(std::string_view name) {
    for (LearnerKind k : {LearnerKind::Logr, LearnerKind::Ann, LearnerKind::RbfnRan,
                          LearnerKind::RbfnKmc, LearnerKind::RbfnFcm, LearnerKind::Dtf}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_two_classes(const std::vector<int>& y) {
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw ParameterError("training requires records of both classes");
}

void fill_training_scores(TrainedModel& m, const Matrix& x, const std::vector<int>& y) {
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < x.rows; ++i) {
        cm.add(m.predict(x.row(i)), y[i] == 1);
    }
    m.training_accuracy = accuracy(cm);
    m.training_f_measure = f_measure(cm);
}

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

class LogisticModel final : public Classifier {
public:
    LogisticModel(std::vector<double> beta, LogrParams params, std::uint64_t seed)
        : beta_(std::move(beta)), params_(params), seed_(seed) {}

    double score(std::span<const double> x) const override {
        double z = beta_[0];
        for (std::size_t i = 0; i < x.size(); ++i) z += beta_[i + 1] * x[i];
        return sigmoid(z);
    }

    LearnerKind kind() const override { return LearnerKind::Logr; }

    std::string to_json() const override {
        json j;
        j["format_version"] = 1;
        j["kind"] = to_string(kind());
        j["hyperparams"] = {{"tolerance", params_.tolerance},
                            {"max_iterations", params_.max_iterations},
                            {"separation_ridge", params_.separation_ridge},
                            {"seed", seed_}};
        j["parameters"] = {{"coefficients", beta_}};
        return j.dump();
    }

    const std::vector<double>& coefficients() const { return beta_; }

private:
    std::vector<double> beta_; // intercept first
    LogrParams params_;
    std::uint64_t seed_;
};

LogisticFit irls_pass(const Matrix& x, const std::vector<int>& y, double tolerance,
                      int max_iterations, double ridge) {
    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    Eigen::MatrixXd a(n, p + 1);
    Eigen::VectorXd yv(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = x(i, j);
        }
        yv(static_cast<Eigen::Index>(i)) = y[i];
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
    auto log_likelihood = [&](const Eigen::VectorXd& b) {
        const Eigen::VectorXd eta = a * b;
        double ll = 0.0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = std::clamp(sigmoid(eta(i)), 1e-12, 1.0 - 1e-12);
            ll += yv(i) > 0.5 ? std::log(mu) : std::log(1.0 - mu);
        }
        if (ridge > 0.0) ll -= 0.5 * ridge * b.squaredNorm();
        return ll;
    };

    LogisticFit fit;
    double ll = log_likelihood(beta);
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const Eigen::VectorXd eta = a * beta;
        Eigen::VectorXd w(eta.size()), z(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = sigmoid(eta(i));
            const double wi = std::max(mu * (1.0 - mu), 1e-10);
            w(i) = wi;
            z(i) = eta(i) + (yv(i) - mu) / wi;
        }
        Eigen::MatrixXd h = a.transpose() * w.asDiagonal() * a;
        if (ridge > 0.0) h.diagonal().array() += ridge;
        const Eigen::VectorXd rhs = a.transpose() * (w.asDiagonal() * z);
        const Eigen::VectorXd next = h.ldlt().solve(rhs);
        if (!next.allFinite()) {
            fit.separated = true;
            break;
        }
        const double next_ll = log_likelihood(next);
        const double delta = std::fabs(next_ll - ll);
        beta = next;
        ll = next_ll;
        if (delta < tolerance) {
            ++iter;
            break;
        }
    }

    // Saturated, perfectly classifying fits mean the likelihood has no
    // finite maximizer.
    const Eigen::VectorXd eta = a * beta;
    bool all_correct = true;
    double max_eta = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        max_eta = std::max(max_eta, std::fabs(eta(i)));
        if ((eta(i) >= 0.0) != (yv(i) > 0.5)) all_correct = false;
    }
    if (all_correct && max_eta > 25.0) fit.separated = true;

    fit.beta.assign(beta.data(), beta.data() + beta.size());
    fit.log_likelihood = ll;
    fit.iterations = iter;
    return fit;
}

} // namespace

LogisticFit fit_logistic_irls(const Matrix& x, const std::vector<int>& y, double tolerance,
                              int max_iterations, double separation_ridge) {
    if (x.rows != y.size()) throw ParameterError("fit_logistic_irls: row/label mismatch");
    LogisticFit fit = irls_pass(x, y, tolerance, max_iterations, 0.0);
    if (fit.separated && separation_ridge > 0.0) {
        LogisticFit ridged = irls_pass(x, y, tolerance, max_iterations, separation_ridge);
        ridged.separated = true;
        return ridged;
    }
    return fit;
}

TrainedModel train_logr(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec) {
    if (x.rows != y.size()) throw ParameterError("train_logr: row/label mismatch");
    if (x.rows < 2) throw ParameterError("train_logr: need at least 2 records");
    check_two_classes(y);

    const LogisticFit fit = fit_logistic_irls(x, y, spec.logr.tolerance,
                                              spec.logr.max_iterations,
                                              spec.logr.separation_ridge);
    TrainedModel m;
    m.kind = LearnerKind::Logr;
    if (fit.separated) {
        m.warnings.push_back("perfect separation detected; coefficients ridge-capped");
    }
    m.model = std::make_shared<LogisticModel>(fit.beta, spec.logr, spec.seed);
    fill_training_scores(m, x, y);
    return m;
}

// ---------------------------------------------------------------------------
// ANN
// ---------------------------------------------------------------------------

namespace ann_detail {

double forward(std::span<const double> weights, const Topology& topo, std::span<const double> x) {
    const std::size_t p = topo.inputs;
    const std::size_t h = topo.hidden;
    const double* w1 = weights.data();           // h rows of (1 + p)
    const double* w2 = weights.data() + h * (p + 1); // 1 + h
    double z_out = w2[0];
    for (std::size_t j = 0; j < h; ++j) {
        const double* row = w1 + j * (p + 1);
        double z = row[0];
        for (std::size_t i = 0; i < p; ++i) z += row[i + 1] * x[i];
        z_out += w2[j + 1] * sigmoid(z);
    }
    return sigmoid(z_out);
}

double mse(std::span<const double> weights, const Topology& topo, const Matrix& x,
           const std::vector<int>& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double d = forward(weights, topo, x.row(i)) - y[i];
        total += d * d;
    }
    return total / static_cast<double>(x.rows);
}

void mse_gradient(std::span<const double> weights, const Topology& topo, const Matrix& x,
                  const std::vector<int>& y, std::span<double> grad) {
    const std::size_t p = topo.inputs;
    const std::size_t h = topo.hidden;
    const double* w1 = weights.data();
    const double* w2 = weights.data() + h * (p + 1);
    double* g1 = grad.data();
    double* g2 = grad.data() + h * (p + 1);
    std::fill(grad.begin(), grad.end(), 0.0);

    std::vector<double> act(h);
    const double inv_n = 1.0 / static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        double z_out = w2[0];
        for (std::size_t j = 0; j < h; ++j) {
            const double* wrow = w1 + j * (p + 1);
            double z = wrow[0];
            for (std::size_t i = 0; i < p; ++i) z += wrow[i + 1] * row[i];
            act[j] = sigmoid(z);
            z_out += w2[j + 1] * act[j];
        }
        const double out = sigmoid(z_out);
        const double d_out = 2.0 * inv_n * (out - y[r]) * out * (1.0 - out);
        g2[0] += d_out;
        for (std::size_t j = 0; j < h; ++j) {
            g2[j + 1] += d_out * act[j];
            const double d_hidden = d_out * w2[j + 1] * act[j] * (1.0 - act[j]);
            double* grow = g1 + j * (p + 1);
            grow[0] += d_hidden;
            for (std::size_t i = 0; i < p; ++i) grow[i + 1] += d_hidden * row[i];
        }
    }
}

} // namespace ann_detail

namespace {

class AnnModel final : public Classifier {
public:
    AnnModel(ann_detail::Topology topo, std::vector<double> weights, AnnParams params,
             double chosen_lr, std::uint64_t seed)
        : topo_(topo), weights_(std::move(weights)), params_(std::move(params)),
          chosen_lr_(chosen_lr), seed_(seed) {}

    double score(std::span<const double> x) const override {
        return ann_detail::forward(weights_, topo_, x);
    }

    LearnerKind kind() const override { return LearnerKind::Ann; }

    std::string to_json() const override {
        json j;
        j["format_version"] = 1;
        j["kind"] = to_string(kind());
        j["hyperparams"] = {{"hidden_units", topo_.hidden},
                            {"inputs", topo_.inputs},
                            {"epochs", params_.epochs},
                            {"learning_rate", chosen_lr_},
                            {"seed", seed_}};
        j["parameters"] = {{"weights", weights_}};
        return j.dump();
    }

    const ann_detail::Topology& topology() const { return topo_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    ann_detail::Topology topo_;
    std::vector<double> weights_;
    AnnParams params_;
    double chosen_lr_;
    std::uint64_t seed_;
};

std::vector<double> ann_init_weights(const ann_detail::Topology& topo, Rng& rng) {
    std::vector<double> w(topo.weight_count());
    for (double& v : w) v = rng.uniform(-0.5, 0.5);
    return w;
}

/// Runs full-batch gradient descent in place. Returns false on a non-finite
/// loss (divergence).
bool ann_gradient_descent(std::vector<double>& weights, const ann_detail::Topology& topo,
                          const Matrix& x, const std::vector<int>& y, double lr, int epochs) {
    std::vector<double> grad(weights.size());
    for (int e = 0; e < epochs; ++e) {
        ann_detail::mse_gradient(weights, topo, x, y, grad);
        bool finite = true;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            weights[i] -= lr * grad[i];
            if (!std::isfinite(weights[i])) finite = false;
        }
        if (!finite) return false;
    }
    return std::isfinite(ann_detail::mse(weights, topo, x, y));
}

} // namespace

TrainedModel train_ann(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec) {
    if (x.rows != y.size()) throw ParameterError("train_ann: row/label mismatch");
    check_two_classes(y);

    const AnnParams& params = spec.ann;
    ann_detail::Topology topo;
    topo.inputs = x.cols;
    topo.hidden = params.hidden_units > 0
                      ? static_cast<std::size_t>(params.hidden_units)
                      : std::min<std::size_t>(2 * x.cols + 1, 20);
    if (params.learning_rate_grid.empty()) throw ParameterError("train_ann: empty learning-rate grid");

    // Pick the learning constant by internal cross validation on the
    // training split: lowest mean validation MSE wins, grid order breaks ties.
    Rng cv_rng(derive_seed(spec.seed, "ann-cv"));
    const std::size_t folds =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(params.cv_folds, 2)), x.rows);
    const auto partition = detail::stratified_partition(y, folds, cv_rng);

    double best_lr = 0.0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (double lr : params.learning_rate_grid) {
        double total = 0.0;
        std::size_t scored = 0;
        bool diverged = false;
        for (std::size_t f = 0; f < partition.size() && !diverged; ++f) {
            if (partition[f].empty()) continue;
            std::vector<char> held(x.rows, 0);
            for (std::size_t i : partition[f]) held[i] = 1;
            Matrix xt(x.rows - partition[f].size(), x.cols);
            std::vector<int> yt;
            yt.reserve(xt.rows);
            std::size_t r = 0;
            for (std::size_t i = 0; i < x.rows; ++i) {
                if (held[i]) continue;
                std::copy(x.row(i).begin(), x.row(i).end(), xt.row(r).begin());
                yt.push_back(y[i]);
                ++r;
            }
            if (yt.empty()) continue;
            Rng init_rng(derive_seed(spec.seed, "ann-init"));
            std::vector<double> w = ann_init_weights(topo, init_rng);
            if (!ann_gradient_descent(w, topo, xt, yt, lr, params.epochs)) {
                diverged = true;
                break;
            }
            for (std::size_t i : partition[f]) {
                const double d = ann_detail::forward(w, topo, x.row(i)) - y[i];
                total += d * d;
                ++scored;
            }
        }
        if (diverged || scored == 0) continue;
        const double mse = total / static_cast<double>(scored);
        if (mse < best_mse) {
            best_mse = mse;
            best_lr = lr;
        }
    }
    if (best_lr == 0.0) {
        // Nothing survived CV; fall back to trying the grid directly below.
        best_lr = params.learning_rate_grid.front();
    }

    // Final training at the chosen rate, stepping down the grid on divergence.
    std::vector<double> grid = params.learning_rate_grid;
    std::vector<double> order;
    order.push_back(best_lr);
    for (double lr : grid) {
        if (lr < best_lr) order.push_back(lr);
    }
    std::sort(order.begin() + 1, order.end(), std::greater<>());

    TrainedModel m;
    m.kind = LearnerKind::Ann;
    for (std::size_t attempt = 0; attempt < order.size(); ++attempt) {
        Rng init_rng(derive_seed(spec.seed, "ann-init"));
        std::vector<double> w = ann_init_weights(topo, init_rng);
        if (ann_gradient_descent(w, topo, x, y, order[attempt], params.epochs)) {
            if (attempt > 0) {
                m.warnings.push_back("training diverged; learning constant lowered to " +
                                     std::to_string(order[attempt]));
            }
            m.model = std::make_shared<AnnModel>(topo, std::move(w), params, order[attempt],
                                                 spec.seed);
            fill_training_scores(m, x, y);
            return m;
        }
    }
    throw TrainingError("train_ann: gradient descent diverged for every learning constant");
}

// ---------------------------------------------------------------------------
// RBFN
// ---------------------------------------------------------------------------

namespace {

class RbfnModel final : public Classifier {
public:
    RbfnModel(LearnerKind kind, Matrix centers, std::vector<double> widths,
              std::vector<double> weights, RbfnParams params, std::uint64_t seed)
        : kind_(kind), centers_(std::move(centers)), widths_(std::move(widths)),
          weights_(std::move(weights)), params_(params), seed_(seed) {}

    double score(std::span<const double> x) const override {
        double z = weights_[0];
        for (std::size_t j = 0; j < centers_.rows; ++j) {
            z += weights_[j + 1] * basis(j, x);
        }
        return sigmoid(z);
    }

    LearnerKind kind() const override { return kind_; }

    std::string to_json() const override {
        json j;
        j["format_version"] = 1;
        j["kind"] = to_string(kind_);
        j["hyperparams"] = {{"centers", centers_.rows},
                            {"epochs", params_.epochs},
                            {"learning_rate", params_.learning_rate},
                            {"fuzzifier", params_.fuzzifier},
                            {"seed", seed_}};
        j["parameters"] = {{"center_values", centers_.values},
                           {"center_dim", centers_.cols},
                           {"widths", widths_},
                           {"weights", weights_}};
        return j.dump();
    }

    double basis(std::size_t j, std::span<const double> x) const {
        const double d2 = squared_distance(centers_.row(j), x);
        return std::exp(-d2 / (2.0 * widths_[j] * widths_[j]));
    }

    const Matrix& centers() const { return centers_; }

private:
    LearnerKind kind_;
    Matrix centers_;
    std::vector<double> widths_;
    std::vector<double> weights_; // bias first, then one per basis
    RbfnParams params_;
    std::uint64_t seed_;
};

} // namespace

TrainedModel train_rbfn(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec) {
    if (spec.kind != LearnerKind::RbfnRan && spec.kind != LearnerKind::RbfnKmc &&
        spec.kind != LearnerKind::RbfnFcm) {
        throw ParameterError("train_rbfn: spec.kind is not an RBFN variant");
    }
    if (x.rows != y.size()) throw ParameterError("train_rbfn: row/label mismatch");
    check_two_classes(y);

    const RbfnParams& params = spec.rbfn;
    const std::size_t n = x.rows;
    std::size_t k;
    if (params.centers > 0) {
        k = static_cast<std::size_t>(params.centers);
        if (k > n) throw ParameterError("train_rbfn: more centers than records");
    } else {
        k = std::min<std::size_t>(
            std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::sqrt(n)))), 30);
        k = std::min(k, n);
    }

    CenterSet centers;
    switch (spec.kind) {
        case LearnerKind::RbfnRan: {
            Rng rng(derive_seed(spec.seed, "rbfn-centers"));
            centers.centers = Matrix(k, x.cols);
            std::size_t c = 0;
            for (std::size_t idx : rng.sample_without_replacement(n, k)) {
                std::copy(x.row(idx).begin(), x.row(idx).end(), centers.centers.row(c).begin());
                ++c;
            }
            centers.widths.assign(k, rbf_width_heuristic(centers.centers));
            break;
        }
        case LearnerKind::RbfnKmc:
            centers = kmeans(x, k, derive_seed(spec.seed, "rbfn-centers"));
            break;
        default:
            centers = fuzzy_cmeans(x, k, params.fuzzifier, derive_seed(spec.seed, "rbfn-centers"));
            break;
    }
    if (params.width_override > 0.0) {
        centers.widths.assign(k, params.width_override);
    }

    // Basis activations, then gradient descent on the squashed output's MSE.
    Matrix phi(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double d2 = squared_distance(x.row(i), centers.centers.row(j));
            phi(i, j) = std::exp(-d2 / (2.0 * centers.widths[j] * centers.widths[j]));
        }
    }

    TrainedModel m;
    m.kind = spec.kind;

    double lr = params.learning_rate;
    std::vector<double> weights;
    for (int attempt = 0; attempt < 6; ++attempt) {
        weights.assign(k + 1, 0.0);
        std::vector<double> grad(k + 1);
        bool finite = true;
        const double inv_n = 1.0 / static_cast<double>(n);
        for (int e = 0; e < params.epochs && finite; ++e) {
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double z = weights[0];
                for (std::size_t j = 0; j < k; ++j) z += weights[j + 1] * phi(i, j);
                const double out = sigmoid(z);
                const double d = 2.0 * inv_n * (out - y[i]) * out * (1.0 - out);
                grad[0] += d;
                for (std::size_t j = 0; j < k; ++j) grad[j + 1] += d * phi(i, j);
            }
            for (std::size_t j = 0; j <= k; ++j) {
                weights[j] -= lr * grad[j];
                if (!std::isfinite(weights[j])) finite = false;
            }
        }
        if (finite) break;
        lr *= 0.5;
        m.warnings.push_back("output-weight descent diverged; learning rate halved");
        weights.clear();
    }
    if (weights.empty()) throw TrainingError("train_rbfn: output-weight training diverged");

    m.model = std::make_shared<RbfnModel>(spec.kind, std::move(centers.centers),
                                          std::move(centers.widths), std::move(weights), params,
                                          spec.seed);
    fill_training_scores(m, x, y);
    return m;
}

// ---------------------------------------------------------------------------
// Decision tree forest
// ---------------------------------------------------------------------------

namespace {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double faulty_fraction = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    bool vote(std::span<const double> x) const {
        int at = 0;
        while (nodes[at].feature >= 0) {
            at = x[static_cast<std::size_t>(nodes[at].feature)] <= nodes[at].threshold
                     ? nodes[at].left
                     : nodes[at].right;
        }
        return nodes[at].faulty_fraction >= 0.5;
    }
};

double gini(std::size_t pos, std::size_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, const DtfParams& params, Rng& rng)
        : x_(x), y_(y), params_(params), rng_(rng) {}

    Tree build(std::vector<std::size_t> sample) {
        Tree t;
        grow(t, std::move(sample));
        return t;
    }

private:
    int grow(Tree& t, std::vector<std::size_t> idx) {
        const int node_id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();

        std::size_t pos = 0;
        for (std::size_t i : idx) pos += (y_[i] == 1);
        t.nodes[node_id].faulty_fraction =
            idx.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(idx.size());

        const bool pure = pos == 0 || pos == idx.size();
        if (pure || idx.size() < static_cast<std::size_t>(params_.min_samples_split)) {
            return node_id;
        }

        const std::size_t p = x_.cols;
        std::vector<std::size_t> features;
        if (params_.feature_subsample) {
            const std::size_t m = static_cast<std::size_t>(
                std::ceil(std::sqrt(static_cast<double>(p))));
            features = rng_.sample_without_replacement(p, std::min(m, p));
        } else {
            features.resize(p);
            std::iota(features.begin(), features.end(), std::size_t{0});
        }

        const double parent = gini(pos, idx.size());
        double best_score = parent - 1e-12;
        std::size_t best_feature = p;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> vals(idx.size());
        for (std::size_t f : features) {
            for (std::size_t i = 0; i < idx.size(); ++i) {
                vals[i] = {x_(idx[i], f), y_[idx[i]]};
            }
            std::sort(vals.begin(), vals.end());
            std::size_t left_pos = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_pos += (vals[i].second == 1);
                if (vals[i].first == vals[i + 1].first) continue;
                const std::size_t nl = i + 1;
                const std::size_t nr = vals.size() - nl;
                const double score =
                    (static_cast<double>(nl) * gini(left_pos, nl) +
                     static_cast<double>(nr) * gini(pos - left_pos, nr)) /
                    static_cast<double>(vals.size());
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_feature == p) return node_id; // no useful split in this subset

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            (x_(i, best_feature) <= best_threshold ? left : right).push_back(i);
        }
        if (left.empty() || right.empty()) return node_id;

        idx.clear();
        idx.shrink_to_fit();
        t.nodes[node_id].feature = static_cast<int>(best_feature);
        t.nodes[node_id].threshold = best_threshold;
        const int l = grow(t, std::move(left));
        t.nodes[node_id].left = l;
        const int r = grow(t, std::move(right));
        t.nodes[node_id].right = r;
        return node_id;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    const DtfParams& params_;
    Rng& rng_;
};

class ForestModel final : public Classifier {
public:
    ForestModel(std::vector<Tree> trees, DtfParams params, std::uint64_t seed)
        : trees_(std::move(trees)), params_(params), seed_(seed) {}

    double score(std::span<const double> x) const override {
        std::size_t votes = 0;
        for (const Tree& t : trees_) votes += t.vote(x);
        return static_cast<double>(votes) / static_cast<double>(trees_.size());
    }

    LearnerKind kind() const override { return LearnerKind::Dtf; }

    std::string to_json() const override {
        json trees = json::array();
        for (const Tree& t : trees_) {
            json nodes = json::array();
            for (const TreeNode& n : t.nodes) {
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.faulty_fraction});
            }
            trees.push_back(std::move(nodes));
        }
        json j;
        j["format_version"] = 1;
        j["kind"] = to_string(kind());
        j["hyperparams"] = {{"trees", params_.trees},
                            {"bootstrap", params_.bootstrap},
                            {"feature_subsample", params_.feature_subsample},
                            {"min_samples_split", params_.min_samples_split},
                            {"seed", seed_}};
        j["parameters"] = {{"trees", std::move(trees)}};
        return j.dump();
    }

private:
    std::vector<Tree> trees_;
    DtfParams params_;
    std::uint64_t seed_;
};

} // namespace

TrainedModel train_dtf(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec) {
    if (x.rows != y.size()) throw ParameterError("train_dtf: row/label mismatch");
    if (x.rows == 0) throw ParameterError("train_dtf: empty training set");
    check_two_classes(y);

    const DtfParams& params = spec.dtf;
    if (params.trees < 1) throw ParameterError("train_dtf: need at least one tree");

    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(params.trees));
    for (int t = 0; t < params.trees; ++t) {
        Rng rng(derive_seed(spec.seed, "dtf-tree", static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> sample(x.rows);
        if (params.bootstrap) {
            for (std::size_t i = 0; i < x.rows; ++i) sample[i] = rng.uniform_index(x.rows);
        } else {
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        TreeBuilder builder(x, y, params, rng);
        trees.push_back(builder.build(std::move(sample)));
    }

    TrainedModel m;
    m.kind = LearnerKind::Dtf;
    m.model = std::make_shared<ForestModel>(std::move(trees), params, spec.seed);
    fill_training_scores(m, x, y);
    return m;
}

TrainedModel train_learner(const Matrix& x, const std::vector<int>& y, const LearnerSpec& spec) {
    switch (spec.kind) {
        case LearnerKind::Logr: return train_logr(x, y, spec);
        case LearnerKind::Ann: return train_ann(x, y, spec);
        case LearnerKind::RbfnRan:
        case LearnerKind::RbfnKmc:
        case LearnerKind::RbfnFcm: return train_rbfn(x, y, spec);
        case LearnerKind::Dtf: return train_dtf(x, y, spec);
    }
    throw ParameterError("train_learner: unknown learner kind");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string TrainedModel::to_json() const {
    json j;
    j["format_version"] = 1;
    j["kind"] = to_string(kind);
    j["training"] = {{"accuracy", training_accuracy}, {"f_measure", training_f_measure}};
    j["warnings"] = warnings;
    j["model"] = json::parse(model->to_json());
    return j.dump();
}

std::shared_ptr<const Classifier> classifier_from_json(std::string_view text) {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != 1) {
        throw ParseError("classifier_from_json: unsupported format version");
    }
    const auto kind = learner_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("classifier_from_json: unknown kind");
    const json& hp = j.at("hyperparams");
    const json& pp = j.at("parameters");

    switch (*kind) {
        case LearnerKind::Logr: {
            LogrParams params;
            params.tolerance = hp.at("tolerance").get<double>();
            params.max_iterations = hp.at("max_iterations").get<int>();
            params.separation_ridge = hp.at("separation_ridge").get<double>();
            return std::make_shared<LogisticModel>(
                pp.at("coefficients").get<std::vector<double>>(), params,
                hp.at("seed").get<std::uint64_t>());
        }
        case LearnerKind::Ann: {
            ann_detail::Topology topo;
            topo.inputs = hp.at("inputs").get<std::size_t>();
            topo.hidden = hp.at("hidden_units").get<std::size_t>();
            AnnParams params;
            params.epochs = hp.at("epochs").get<int>();
            return std::make_shared<AnnModel>(topo, pp.at("weights").get<std::vector<double>>(),
                                              params, hp.at("learning_rate").get<double>(),
                                              hp.at("seed").get<std::uint64_t>());
        }
        case LearnerKind::RbfnRan:
        case LearnerKind::RbfnKmc:
        case LearnerKind::RbfnFcm: {
            RbfnParams params;
            params.epochs = hp.at("epochs").get<int>();
            params.learning_rate = hp.at("learning_rate").get<double>();
            params.fuzzifier = hp.at("fuzzifier").get<double>();
            Matrix centers;
            centers.values = pp.at("center_values").get<std::vector<double>>();
            centers.cols = pp.at("center_dim").get<std::size_t>();
            centers.rows = centers.cols == 0 ? 0 : centers.values.size() / centers.cols;
            return std::make_shared<RbfnModel>(*kind, std::move(centers),
                                               pp.at("widths").get<std::vector<double>>(),
                                               pp.at("weights").get<std::vector<double>>(), params,
                                               hp.at("seed").get<std::uint64_t>());
        }
        case LearnerKind::Dtf: {
            DtfParams params;
            params.trees = hp.at("trees").get<int>();
            params.bootstrap = hp.at("bootstrap").get<bool>();
            params.feature_subsample = hp.at("feature_subsample").get<bool>();
            params.min_samples_split = hp.at("min_samples_split").get<int>();
            std::vector<Tree> trees;
            for (const json& tj : pp.at("trees")) {
                Tree t;
                for (const json& nj : tj) {
                    TreeNode n;
                    n.feature = nj.at(0).get<int>();
                    n.threshold = nj.at(1).get<double>();
                    n.left = nj.at(2).get<int>();
                    n.right = nj.at(3).get<int>();
                    n.faulty_fraction = nj.at(4).get<double>();
                    t.nodes.push_back(n);
                }
                trees.push_back(std::move(t));
            }
            return std::make_shared<ForestModel>(std::move(trees), params,
                                                 hp.at("seed").get<std::uint64_t>());
        }
    }
    throw ParseError("classifier_from_json: unreachable");
}

TrainedModel trained_model_from_json(std::string_view text) {
    const json j = json::parse(text);
    TrainedModel m;
    const auto kind = learner_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("trained_model_from_json: unknown kind");
    m.kind = *kind;
    m.training_accuracy = j.at("training").at("accuracy").get<double>();
    m.training_f_measure = j.at("training").at("f_measure").get<double>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.model = classifier_from_json(j.at("model").dump());
    return m;
}

} // namespace faultpred

#include "faultpred/metric_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"

namespace faultpred {

std::vector<std::string> TTestReport::selected_names() const {
    std::vector<std::string> out;
    for (const auto& e : per_metric) {
        if (e.selected) out.push_back(e.metric);
    }
    return out;
}

TTestReport ttest_filter(const Dataset& d, double alpha) {
    if (!d.normalized) throw ParameterError("ttest_filter: dataset must be normalized");

    TTestReport report;
    report.alpha = alpha;

    std::vector<double> faulty, clean;
    const auto catalog = metric_catalog();
    std::size_t n_faulty = 0, n_clean = 0;
    for (const auto& r : d.records) (r.label == 1 ? n_faulty : n_clean)++;
    if (n_faulty == 0 || n_clean == 0) {
        throw ParameterError("ttest_filter: both label groups must be non-empty");
    }

    const bool too_small = n_faulty < 2 || n_clean < 2;
    if (too_small) {
        report.warnings.push_back("dataset too small for the t-test filter (a group has < 2 samples); nothing selected");
    }

    for (std::size_t j = 0; j < catalog.size(); ++j) {
        faulty.clear();
        clean.clear();
        for (const auto& r : d.records) {
            (r.label == 1 ? faulty : clean).push_back(r.values[j]);
        }
        TTestEntry e;
        e.metric = std::string(catalog[j]);
        if (too_small) {
            e.t_statistic = 0.0;
            e.p_value = 1.0;
            report.per_metric.push_back(e);
            continue;
        }
        const double v1 = sample_variance(faulty);
        const double v0 = sample_variance(clean);
        if (v1 == 0.0 && v0 == 0.0) {
            // No within-group variation: the Welch statistic is undefined, so
            // the metric is reported degenerate and never selected.
            e.degenerate = true;
            e.t_statistic = 0.0;
            e.p_value = 1.0;
            report.per_metric.push_back(e);
            continue;
        }
        const double n1 = static_cast<double>(faulty.size());
        const double n0 = static_cast<double>(clean.size());
        const double se2 = v1 / n1 + v0 / n0;
        const double t = (mean(faulty) - mean(clean)) / std::sqrt(se2);
        const double df = se2 * se2 /
                          ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v0 / n0) * (v0 / n0) / (n0 - 1.0));
        e.t_statistic = t;
        e.p_value = student_t_two_sided_p(t, df);
        e.selected = e.p_value < alpha;
        report.per_metric.push_back(e);
    }
    return report;
}

namespace {

struct OlsFit {
    bool singular = false;
    double rss = std::numeric_limits<double>::infinity();
};

OlsFit fit_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    OlsFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) {
        fit.singular = true;
        return fit;
    }
    const Eigen::VectorXd beta = qr.solve(y);
    fit.rss = (y - design * beta).squaredNorm();
    return fit;
}

} // namespace

SelectedMetricSet stepwise_forward_select(const Dataset& d,
                                          const std::vector<std::string>& candidates) {
    if (!d.normalized) throw ParameterError("stepwise_forward_select: dataset must be normalized");
    if (candidates.empty()) throw ParameterError("stepwise_forward_select: no candidates");
    const std::size_t n_faulty = d.faulty_count();
    if (n_faulty == 0 || n_faulty == d.size()) {
        throw ParameterError("stepwise_forward_select: both classes required");
    }

    constexpr double kPToEnter = 0.05;

    // Candidate columns, in catalog order so greedy ties resolve predictably.
    std::vector<std::pair<std::size_t, std::string>> pool;
    for (std::string_view name : metric_catalog()) {
        for (const auto& c : candidates) {
            if (c == name) {
                pool.emplace_back(*metric_index(name), std::string(name));
                break;
            }
        }
    }
    if (pool.size() != candidates.size()) {
        throw ParameterError("stepwise_forward_select: candidate not in catalog");
    }

    const std::size_t n = d.size();
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = d.records[i].label;

    SelectedMetricSet result;
    result.filter_survivors = candidates;
    result.provenance.dataset = d.name;
    result.provenance.trace.push_back("criterion: MLR partial-F p-to-enter < 0.05");

    std::vector<std::size_t> chosen;              // catalog indices, insertion order
    std::vector<bool> in_model(pool.size(), false);

    auto build_design = [&](const std::vector<std::size_t>& cols) {
        Eigen::MatrixXd x(n, cols.size() + 1);
        for (std::size_t i = 0; i < n; ++i) {
            x(static_cast<Eigen::Index>(i), 0) = 1.0;
            for (std::size_t j = 0; j < cols.size(); ++j) {
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) =
                    d.records[i].values[cols[j]];
            }
        }
        return x;
    };

    double rss_current = fit_ols(build_design({}), y).rss;

    while (chosen.size() < pool.size()) {
        const std::size_t params_after = chosen.size() + 2; // intercept + chosen + candidate
        if (n <= params_after) {
            result.provenance.trace.push_back("stop: insufficient residual degrees of freedom");
            break;
        }
        const double df_resid = static_cast<double>(n - params_after);

        double best_rss = std::numeric_limits<double>::infinity();
        std::size_t best_pool = pool.size();
        for (std::size_t c = 0; c < pool.size(); ++c) {
            if (in_model[c]) continue;
            std::vector<std::size_t> cols = chosen;
            cols.push_back(pool[c].first);
            const OlsFit fit = fit_ols(build_design(cols), y);
            if (fit.singular) {
                result.provenance.trace.push_back("skip (collinear this round): " + pool[c].second);
                continue;
            }
            if (fit.rss < best_rss) {
                best_rss = fit.rss;
                best_pool = c;
            }
        }
        if (best_pool == pool.size()) {
            result.provenance.trace.push_back("stop: no admissible candidate");
            break;
        }

        const double improvement = rss_current - best_rss;
        const double f = improvement <= 0.0 ? 0.0 : improvement / (best_rss / df_resid);
        const double p_enter = fisher_f_sf(f, 1.0, df_resid);
        if (p_enter >= kPToEnter) {
            result.provenance.trace.push_back("stop: best candidate " + pool[best_pool].second +
                                              " p-to-enter >= 0.05");
            break;
        }
        in_model[best_pool] = true;
        chosen.push_back(pool[best_pool].first);
        result.wrapper_selection.push_back(pool[best_pool].second);
        result.provenance.trace.push_back("enter: " + pool[best_pool].second);
        rss_current = best_rss;
    }

    if (result.wrapper_selection.empty()) {
        // Keep the pipeline usable: force the single best candidate.
        double best_rss = std::numeric_limits<double>::infinity();
        std::size_t best_pool = pool.size();
        for (std::size_t c = 0; c < pool.size(); ++c) {
            const OlsFit fit = fit_ols(build_design({pool[c].first}), y);
            if (!fit.singular && fit.rss < best_rss) {
                best_rss = fit.rss;
                best_pool = c;
            }
        }
        if (best_pool < pool.size()) {
            result.wrapper_selection.push_back(pool[best_pool].second);
            result.provenance.trace.push_back("fallback: forced best single candidate " +
                                              pool[best_pool].second);
        } else {
            result.wrapper_selection = result.filter_survivors;
            result.provenance.trace.push_back("fallback: all candidates collinear, kept survivors");
        }
    }
    return result;
}

SelectedMetricSet validate_metrics(const Dataset& raw, double alpha) {
    const Dataset normalized = raw.normalized ? raw : normalize(raw);
    const TTestReport filter = ttest_filter(normalized, alpha);
    std::vector<std::string> survivors = filter.selected_names();
    if (survivors.empty()) {
        SelectedMetricSet fallback;
        for (std::string_view m : metric_catalog()) fallback.filter_survivors.emplace_back(m);
        fallback.wrapper_selection = fallback.filter_survivors;
        fallback.provenance.dataset = raw.name;
        fallback.provenance.alpha = alpha;
        fallback.provenance.trace.push_back(
            "fallback: t-test filter selected nothing, using all metrics");
        return fallback;
    }
    SelectedMetricSet selection = stepwise_forward_select(normalized, survivors);
    selection.provenance.alpha = alpha;
    return selection;
}

std::string selection_report_json(const std::string& dataset_name,
                                  const TTestReport& filter,
                                  const SelectedMetricSet& selection) {
    nlohmann::json j;
    j["dataset"] = dataset_name;
    j["alpha"] = filter.alpha;
    auto& metrics = j["t_test"] = nlohmann::json::array();
    for (const auto& e : filter.per_metric) {
        metrics.push_back({{"metric", e.metric},
                           {"t", e.t_statistic},
                           {"p", e.p_value},
                           {"selected", e.selected},
                           {"degenerate", e.degenerate}});
    }
    j["filter_warnings"] = filter.warnings;
    j["filter_survivors"] = selection.filter_survivors;
    j["wrapper_selection"] = selection.wrapper_selection;
    j["wrapper_trace"] = selection.provenance.trace;
    return j.dump(2);
}

} // namespace faultpred

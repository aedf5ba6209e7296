#pragma once

#include <string>
#include <vector>

#include "faultpred/dataset.hpp"

namespace faultpred {

/// Per-metric outcome of the two-sample Welch t-test between the faulty and
/// non-faulty groups.
struct TTestEntry {
    std::string metric;
    double t_statistic = 0.0;
    double p_value = 1.0;
    bool selected = false;
    bool degenerate = false; // zero variance in both groups
};

struct TTestReport {
    double alpha = 0.05;
    std::vector<TTestEntry> per_metric; // catalog order, one entry per metric
    std::vector<std::string> warnings;

    std::vector<std::string> selected_names() const;
};

struct SelectionProvenance {
    std::string dataset;
    double alpha = 0.05;
    std::vector<std::string> trace; // wrapper steps, skips, fallbacks
};

struct SelectedMetricSet {
    std::vector<std::string> filter_survivors;
    std::vector<std::string> wrapper_selection; // insertion order
    SelectionProvenance provenance;
};

/// Welch two-sample t-test per metric between faulty and non-faulty groups;
/// metrics with two-sided p < alpha are selected. A group with fewer than 2
/// samples degenerates the filter to selecting nothing (with a warning).
TTestReport ttest_filter(const Dataset& d, double alpha = 0.05);

/// Greedy stepwise forward selection wrapping a multivariate linear
/// regression of the binary label: at each round the candidate with the
/// largest residual-sum-of-squares improvement enters if its partial-F
/// p-to-enter is below 0.05. Collinear candidates are skipped for the round
/// and noted in provenance. Ties break by catalog order.
SelectedMetricSet stepwise_forward_select(const Dataset& d,
                                          const std::vector<std::string>& candidates);

/// The composite pipeline: normalize, t-test filter, stepwise wrapper over
/// the filter survivors. Falls back to the full catalog when every metric is
/// degenerate.
SelectedMetricSet validate_metrics(const Dataset& raw, double alpha = 0.05);

/// JSON report with per-metric t/p/selected flags and the wrapper trace.
std::string selection_report_json(const std::string& dataset_name,
                                  const TTestReport& filter,
                                  const SelectedMetricSet& selection);

} // namespace faultpred

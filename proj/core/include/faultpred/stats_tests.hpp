#pragma once

#include <span>
#include <string>
#include <vector>

#include "faultpred/matrix.hpp"

namespace faultpred {

struct WilcoxonResult {
    double statistic = 0.0; // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p_value = 1.0; // two-sided
    std::size_t n_used = 0; // pairs remaining after zero differences drop
    bool exact = false;
};

/// Paired Wilcoxon signed-rank test. Zero differences are dropped and ties
/// among |differences| take average ranks. Exact sign-flip enumeration for
/// up to 12 remaining pairs, normal approximation with tie and continuity
/// corrections beyond that. All-zero differences give p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

/// alpha / n_items.
double bonferroni_cutoff(double alpha, std::size_t n_items);

struct PairedSample {
    std::string label;
    std::vector<double> values;
};

struct ComparisonMatrix {
    std::vector<std::string> labels;
    Matrix mean_difference; // antisymmetric, diagonal 0
    Matrix p_values;        // symmetric, diagonal 1
    double alpha = 0.05;
    double cutoff = 0.05; // Bonferroni over C(n,2) pairs

    bool significant(std::size_t i, std::size_t j) const {
        return i != j && p_values(i, j) < cutoff;
    }

    /// Two stacked blocks: mean differences, then p-values.
    std::string to_csv() const;
};

ComparisonMatrix pairwise_compare(std::span<const PairedSample> samples, double alpha);

} // namespace faultpred

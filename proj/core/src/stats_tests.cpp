#include "faultpred/stats_tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"

namespace faultpred {

namespace {

constexpr std::size_t kExactLimit = 12; // 2^12 = 4096 sign assignments

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("wilcoxon_signed_rank: length mismatch");

    std::vector<double> diffs;
    diffs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }

    WilcoxonResult result;
    result.n_used = diffs.size();
    if (diffs.empty()) {
        result.exact = true;
        result.p_value = 1.0;
        return result;
    }

    std::vector<double> abs_d(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) abs_d[i] = std::fabs(diffs[i]);
    const std::vector<double> ranks = average_ranks(abs_d);

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0.0 ? w_plus : w_minus) += ranks[i];
    }
    result.w_plus = w_plus;
    result.w_minus = w_minus;
    result.statistic = std::min(w_plus, w_minus);

    const std::size_t n = diffs.size();
    if (n <= kExactLimit) {
        // Average ranks are multiples of 1/2, so doubled ranks are exact
        // integers and the enumeration is free of float comparisons.
        std::vector<std::int64_t> r2(n);
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = static_cast<std::int64_t>(std::llround(2.0 * ranks[i]));
        }
        const std::int64_t observed = static_cast<std::int64_t>(std::llround(2.0 * w_plus));
        const std::uint64_t total = std::uint64_t{1} << n;
        std::uint64_t count_le = 0, count_ge = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::int64_t sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::uint64_t{1} << i)) sum += r2[i];
            }
            if (sum <= observed) ++count_le;
            if (sum >= observed) ++count_ge;
        }
        const double tail = static_cast<double>(std::min(count_le, count_ge)) /
                            static_cast<double>(total);
        result.p_value = std::min(1.0, 2.0 * tail);
        result.exact = true;
        return result;
    }

    // Normal approximation with tie and continuity corrections.
    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    std::vector<double> sorted = abs_d;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        if (t > 1.0) var -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    if (var <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double centered = w_plus - mu;
    const double cc = centered > 0.0 ? -0.5 : (centered < 0.0 ? 0.5 : 0.0);
    const double z = (centered + cc) / std::sqrt(var);
    result.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
    return result;
}

double bonferroni_cutoff(double alpha, std::size_t n_items) {
    if (alpha <= 0.0 || alpha >= 1.0) throw ParameterError("bonferroni_cutoff: alpha must be in (0,1)");
    if (n_items == 0) throw ParameterError("bonferroni_cutoff: n_items must be positive");
    return alpha / static_cast<double>(n_items);
}

ComparisonMatrix pairwise_compare(std::span<const PairedSample> samples, double alpha) {
    if (samples.size() < 2) throw ParameterError("pairwise_compare: need at least two samples");
    const std::size_t len = samples[0].values.size();
    for (const auto& s : samples) {
        if (s.values.size() != len) throw ParameterError("pairwise_compare: vector length mismatch");
    }

    const std::size_t n = samples.size();
    ComparisonMatrix cm;
    cm.alpha = alpha;
    cm.cutoff = bonferroni_cutoff(alpha, n * (n - 1) / 2);
    cm.mean_difference = Matrix(n, n, 0.0);
    cm.p_values = Matrix(n, n, 1.0);
    for (const auto& s : samples) cm.labels.push_back(s.label);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double diff = 0.0;
            for (std::size_t r = 0; r < len; ++r) {
                diff += samples[i].values[r] - samples[j].values[r];
            }
            diff /= static_cast<double>(len);
            const WilcoxonResult w = wilcoxon_signed_rank(samples[i].values, samples[j].values);
            cm.mean_difference(i, j) = diff;
            cm.mean_difference(j, i) = -diff;
            cm.p_values(i, j) = w.p_value;
            cm.p_values(j, i) = w.p_value;
        }
    }
    return cm;
}

std::string ComparisonMatrix::to_csv() const {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    auto block = [&](const char* title, const Matrix& m) {
        out << title << "\n";
        out << "label";
        for (const auto& l : labels) out << "," << l;
        out << "\n";
        for (std::size_t i = 0; i < labels.size(); ++i) {
            out << labels[i];
            for (std::size_t j = 0; j < labels.size(); ++j) out << "," << m(i, j);
            out << "\n";
        }
    };
    block("mean_difference", mean_difference);
    block("p_value", p_values);
    out << "cutoff," << cutoff << "\n";
    return out.str();
}

} // namespace faultpred

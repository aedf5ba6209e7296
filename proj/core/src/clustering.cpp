#include "faultpred/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"

namespace faultpred {

namespace {

constexpr std::size_t kMaxIterations = 300;
constexpr double kMinWidth = 1e-3;

std::size_t nearest_center(const Matrix& centers, std::span<const double> point) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows; ++c) {
        const double d = squared_distance(centers.row(c), point);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace

double rbf_width_heuristic(const Matrix& centers) {
    double d_max = 0.0;
    for (std::size_t a = 0; a < centers.rows; ++a) {
        for (std::size_t b = a + 1; b < centers.rows; ++b) {
            d_max = std::max(d_max, squared_distance(centers.row(a), centers.row(b)));
        }
    }
    d_max = std::sqrt(d_max);
    const double k = static_cast<double>(std::max<std::size_t>(centers.rows, 1));
    return std::max(d_max / std::sqrt(2.0 * k), kMinWidth);
}

CenterSet kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, LloydTrace* trace) {
    if (k == 0) throw ParameterError("kmeans: k must be positive");
    if (k > points.rows) throw ParameterError("kmeans: k exceeds the number of points");

    Rng rng(seed);
    Matrix centers(k, points.cols);
    for (std::size_t c = 0; const std::size_t idx : rng.sample_without_replacement(points.rows, k)) {
        std::copy(points.row(idx).begin(), points.row(idx).end(), centers.row(c).begin());
        ++c;
    }

    std::vector<std::size_t> assignment(points.rows, 0);
    std::vector<std::size_t> counts(k, 0);
    if (trace) {
        trace->objective.clear();
        trace->iterations = 0;
    }

    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        bool changed = iter == 0;
        double wcss = 0.0;
        for (std::size_t i = 0; i < points.rows; ++i) {
            const std::size_t c = nearest_center(centers, points.row(i));
            if (c != assignment[i]) changed = true;
            assignment[i] = c;
            wcss += squared_distance(centers.row(c), points.row(i));
        }
        if (trace) {
            trace->objective.push_back(wcss);
            trace->iterations = iter + 1;
        }
        if (!changed && iter > 0) break;

        std::fill(counts.begin(), counts.end(), std::size_t{0});
        std::fill(centers.values.begin(), centers.values.end(), 0.0);
        for (std::size_t i = 0; i < points.rows; ++i) {
            ++counts[assignment[i]];
            auto row = centers.row(assignment[i]);
            const auto p = points.row(i);
            for (std::size_t j = 0; j < points.cols; ++j) row[j] += p[j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            auto row = centers.row(c);
            for (std::size_t j = 0; j < points.cols; ++j) {
                row[j] /= static_cast<double>(counts[c]);
            }
        }
        // Reseed any empty cluster from the point farthest from its center.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.rows; ++i) {
                if (counts[assignment[i]] <= 1) continue;
                const double d = squared_distance(centers.row(assignment[i]), points.row(i));
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            std::copy(points.row(far).begin(), points.row(far).end(), centers.row(c).begin());
            --counts[assignment[far]];
            assignment[far] = c;
            counts[c] = 1;
        }
    }

    CenterSet out;
    out.centers = std::move(centers);
    out.widths.assign(k, rbf_width_heuristic(out.centers));
    return out;
}

CenterSet fuzzy_cmeans(const Matrix& points, std::size_t k, double fuzzifier, std::uint64_t seed) {
    if (k == 0) throw ParameterError("fuzzy_cmeans: k must be positive");
    if (k > points.rows) throw ParameterError("fuzzy_cmeans: k exceeds the number of points");
    if (fuzzifier <= 1.0) throw ParameterError("fuzzy_cmeans: fuzzifier must exceed 1");

    const std::size_t n = points.rows;
    Rng rng(seed);
    Matrix u(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            u(i, c) = 0.05 + rng.next_double();
            sum += u(i, c);
        }
        for (std::size_t c = 0; c < k; ++c) u(i, c) /= sum;
    }

    Matrix centers(k, points.cols);
    const double exponent = 2.0 / (fuzzifier - 1.0);

    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        // Centers: membership^m weighted means.
        for (std::size_t c = 0; c < k; ++c) {
            double wsum = 0.0;
            auto row = centers.row(c);
            std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = std::pow(u(i, c), fuzzifier);
                wsum += w;
                const auto p = points.row(i);
                for (std::size_t j = 0; j < points.cols; ++j) row[j] += w * p[j];
            }
            if (wsum > 0.0) {
                for (std::size_t j = 0; j < points.cols; ++j) row[j] /= wsum;
            }
        }

        // Memberships from center distances.
        double max_change = 0.0;
        std::vector<double> dist(k);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t zero_count = 0;
            for (std::size_t c = 0; c < k; ++c) {
                dist[c] = std::sqrt(squared_distance(points.row(i), centers.row(c)));
                if (dist[c] == 0.0) ++zero_count;
            }
            for (std::size_t c = 0; c < k; ++c) {
                double next;
                if (zero_count > 0) {
                    next = dist[c] == 0.0 ? 1.0 / static_cast<double>(zero_count) : 0.0;
                } else {
                    double denom = 0.0;
                    for (std::size_t c2 = 0; c2 < k; ++c2) {
                        denom += std::pow(dist[c] / dist[c2], exponent);
                    }
                    next = 1.0 / denom;
                }
                max_change = std::max(max_change, std::fabs(next - u(i, c)));
                u(i, c) = next;
            }
        }
        if (max_change <= 1e-6) break;
    }

    CenterSet out;
    out.centers = std::move(centers);
    out.widths.assign(k, rbf_width_heuristic(out.centers));
    return out;
}

} // namespace faultpred

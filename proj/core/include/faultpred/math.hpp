#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace faultpred {

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

double mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator); 0 for fewer than 2 values.
double sample_variance(std::span<const double> xs);

/// Median of a copy of the input; NaN for empty input.
double median(std::span<const double> xs);

/// Ranks with ties resolved to average ranks (1-based).
std::vector<double> average_ranks(std::span<const double> xs);

/// Spearman rank correlation; NaN when either side has zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Distribution tails
// ---------------------------------------------------------------------------

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Upper tail of the standard normal distribution.
double normal_sf(double z);

/// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

/// Two-sided p-value for a t statistic.
double student_t_two_sided_p(double t, double df);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom.
double fisher_f_sf(double f, double d1, double d2);

// ---------------------------------------------------------------------------
// Deterministic seeding and random numbers
// ---------------------------------------------------------------------------

/// FNV-1a over the previous hash and a field; chain to derive seeds so that
/// adding a dataset or technique never shifts the randomness of another.
std::uint64_t hash_mix(std::uint64_t h, std::uint64_t value);
std::uint64_t hash_mix(std::uint64_t h, std::string_view value);

inline std::uint64_t derive_seed(std::uint64_t master) { return hash_mix(master, std::uint64_t{0x9e3779b97f4a7c15ULL}); }

template <typename First, typename... Rest>
std::uint64_t derive_seed(std::uint64_t master, First&& first, Rest&&... rest) {
    return derive_seed(hash_mix(master, std::forward<First>(first)), std::forward<Rest>(rest)...);
}

/// mt19937_64 engine with hand-rolled draw helpers. The standard pins the
/// engine's output sequence, and by avoiding std::*_distribution (whose
/// mappings are implementation defined) every draw is reproducible across
/// compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform index in [0, n) by rejection sampling (unbiased).
    std::size_t uniform_index(std::size_t n);

    /// Standard normal via Box-Muller.
    double normal();

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    /// k distinct indices drawn from [0, n) in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace faultpred

#pragma once

#include <cstdint>
#include <vector>

#include "faultpred/matrix.hpp"

namespace faultpred {

/// Cluster centers plus the shared Gaussian width used by the RBF layer.
struct CenterSet {
    Matrix centers;             // k x dim
    std::vector<double> widths; // k positive reals
};

/// Per-iteration within-cluster sum of squares, recorded after each
/// assignment step.
struct LloydTrace {
    std::vector<double> objective;
    std::size_t iterations = 0;
};

/// Width heuristic sigma = d_max / sqrt(2k) with d_max the maximum
/// inter-center distance; floored to keep widths strictly positive.
double rbf_width_heuristic(const Matrix& centers);

/// Lloyd's algorithm to an assignment fixpoint or 300 iterations. Empty
/// clusters are reseeded from the point farthest from its current center.
CenterSet kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                 LloydTrace* trace = nullptr);

/// Fuzzy c-means with fuzzifier m > 1, alternating membership/center updates
/// to a 1e-6 max membership change or 300 iterations. A point coincident
/// with a center takes membership 1 there (split evenly across coincident
/// centers).
CenterSet fuzzy_cmeans(const Matrix& points, std::size_t k, double fuzzifier,
                       std::uint64_t seed);

} // namespace faultpred

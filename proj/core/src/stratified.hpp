#pragma once

#include <cstddef>
#include <vector>

#include "faultpred/math.hpp"

namespace faultpred::detail {

/// Seeded shuffle within each label class, then a round-robin deal into k
/// folds. Keeps each fold's faulty proportion within one record of the
/// global proportion.
inline std::vector<std::vector<std::size_t>> stratified_partition(const std::vector<int>& y,
                                                                  std::size_t k, Rng& rng) {
    std::vector<std::size_t> faulty, clean;
    for (std::size_t i = 0; i < y.size(); ++i) {
        (y[i] == 1 ? faulty : clean).push_back(i);
    }
    rng.shuffle(faulty);
    rng.shuffle(clean);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next = 0;
    for (std::size_t i : faulty) folds[next++ % k].push_back(i);
    next = 0;
    for (std::size_t i : clean) folds[next++ % k].push_back(i);
    return folds;
}

} // namespace faultpred::detail

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "faultpred/confusion.hpp"
#include "faultpred/dataset.hpp"
#include "faultpred/learners.hpp"

namespace faultpred {

struct FoldAssignment {
    std::vector<std::vector<std::size_t>> folds;
    std::uint64_t seed = 0;
};

/// Seeded shuffle within each class, round-robin deal into k folds.
FoldAssignment stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

enum class NormalizeMode {
    PerFold, // min/max fit on training folds, held-out fold clamped to [0,1]
    Global,  // single min/max over the whole dataset (the paper's reading)
};

struct FoldResult {
    ConfusionMatrix cm;
    double accuracy = 0.0;
    double f_measure = 0.0;
    bool skipped = false;
    std::string skip_reason;
    std::size_t clamp_events = 0;
};

struct PerformanceReport {
    std::vector<FoldResult> folds;
    ConfusionMatrix pooled;
    double pooled_accuracy = 0.0;
    double pooled_f_measure = 0.0;
    double fold_mean_accuracy = 0.0; // over non-skipped folds
    double fold_mean_f_measure = 0.0;
    std::size_t evaluated_records = 0;
    std::size_t skipped_records = 0;
    std::vector<std::string> warnings;
};

/// Trains on a fold's training split and returns a scorer for the held-out
/// fold. The fold seed is derived from the run seed and the fold index.
using Trainer = std::function<std::shared_ptr<const Classifier>(
    const Matrix& x, const std::vector<int>& y, std::uint64_t fold_seed)>;

/// k-fold cross validation over the named metric subset. The dataset comes
/// in raw; normalization parameters are fit on training folds only (unless
/// Global mode is forced) and held-out values are clamped to [0,1] with the
/// clamp count logged. Folds whose training split lacks a class are skipped
/// with a warning, never silently scored.
PerformanceReport cross_validate(const Trainer& trainer,
                                 const std::vector<std::string>& metric_set, const Dataset& raw,
                                 std::size_t k, std::uint64_t seed,
                                 NormalizeMode mode = NormalizeMode::PerFold);

} // namespace faultpred

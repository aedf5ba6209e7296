#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultpred/learners.hpp"

namespace faultpred {

enum class EnsembleRule { Bte, Mve, Ndtf };

std::string_view to_string(EnsembleRule rule);

/// The five base learners in roster order; ties and votes resolve in this
/// order, and the odd count keeps majority voting tie-free.
inline constexpr std::array<LearnerKind, 5> kBaseRoster = {
    LearnerKind::Logr, LearnerKind::Ann, LearnerKind::RbfnRan,
    LearnerKind::RbfnFcm, LearnerKind::RbfnKmc,
};

struct EnsembleSpec {
    EnsembleRule rule = EnsembleRule::Mve;
    std::array<LearnerSpec, 5> base_specs{}; // one per kBaseRoster entry
    LearnerSpec meta_spec{};                 // NDTF meta learner (DTF)
    std::uint64_t seed = 0;

    /// Default hyperparameters with per-base seeds derived from `seed`.
    static EnsembleSpec defaults(EnsembleRule rule, std::uint64_t seed);
};

using BaseSet = std::array<TrainedModel, 5>;

/// Trains the five roster learners on the same split.
BaseSet train_base_set(const Matrix& x, const std::vector<int>& y,
                       std::span<const LearnerSpec, 5> specs);

struct EnsembleModel {
    EnsembleRule rule{};
    std::vector<TrainedModel> bases; // roster order
    std::size_t chosen_index = 0;    // BTE only
    std::optional<TrainedModel> meta; // NDTF only
    double training_accuracy = 0.0;
    double training_f_measure = 0.0;

    double score(std::span<const double> x) const;
    bool predict(std::span<const double> x) const { return score(x) >= kDecisionThreshold; }
    std::string to_json() const;
};

/// Majority label over the five thresholded base predictions.
int predict_mve(const BaseSet& bases, std::span<const double> x);

EnsembleModel train_bte(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec);
EnsembleModel train_mve(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec);
EnsembleModel train_ndtf(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec);
EnsembleModel train_ensemble(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec);

/// Assembly over an existing base set: the experiment harness trains the
/// roster once per fold and derives all three ensembles from it.
EnsembleModel assemble_bte(BaseSet bases, const Matrix& x, const std::vector<int>& y);
EnsembleModel assemble_mve(BaseSet bases, const Matrix& x, const std::vector<int>& y);
EnsembleModel assemble_ndtf(BaseSet bases, const Matrix& x, const std::vector<int>& y,
                            const LearnerSpec& meta_spec);

} // namespace faultpred

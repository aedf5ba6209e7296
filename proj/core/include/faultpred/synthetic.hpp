#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace faultpred {

/// Published shape of one PROMISE project: class count and faulty count.
struct ProjectShape {
    std::string_view name;
    int classes = 0;
    int faulty = 0;

    double faulty_percent() const { return 100.0 * faulty / classes; }
};

/// The 40 desk-scale projects.
std::span<const ProjectShape> desk_projects();

/// The five prop-* projects (up to 23014 classes).
std::span<const ProjectShape> large_projects();

/// Controls how learnable the generated data is.
struct SynthParams {
    double noise_sigma = 0.9;  // label noise relative to unit-variance risk
    double interaction = 0.4;  // weight of the wmc x cbo interaction term
};

/// One synthetic class-level dataset in PROMISE CSV layout (20 metric
/// columns plus a raw bug count), hitting the shape's class and faulty
/// counts exactly. Fault proneness is driven by wmc, cbo, rfc, lcom and ca;
/// the remaining metrics are size-correlated or pure noise.
std::string synthetic_dataset_csv(const ProjectShape& shape, std::uint64_t seed,
                                  const SynthParams& params = {});

/// Writes <name>.csv per project into `dir`.
void write_synthetic_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                            const SynthParams& params = {}, bool include_large = false);

} // namespace faultpred

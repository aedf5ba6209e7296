#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faultpred/cost_model.hpp"
#include "faultpred/dataset.hpp"
#include "faultpred/evaluation.hpp"
#include "faultpred/metric_validation.hpp"
#include "faultpred/stats_tests.hpp"

namespace faultpred {

/// The eight evaluated prediction techniques: five base learners plus the
/// three heterogeneous ensembles.
enum class Technique { Logr, Ann, RbfnRan, RbfnFcm, RbfnKmc, Bte, Mve, Ndtf };

inline constexpr std::array<Technique, 8> kAllTechniques = {
    Technique::Logr, Technique::Ann,  Technique::RbfnRan, Technique::RbfnFcm,
    Technique::RbfnKmc, Technique::Bte, Technique::Mve,     Technique::Ndtf,
};

std::string_view to_string(Technique t);
std::optional<Technique> technique_from_string(std::string_view name);

enum class MetricSetMode { AllMetrics, SelectedMetrics };

std::string_view to_string(MetricSetMode m); // "AM" / "SM"
std::optional<MetricSetMode> metric_set_from_string(std::string_view name);

struct ExperimentConfig {
    std::string data_dir;
    std::string out_dir = "faultpred-out";
    std::vector<std::string> datasets; // empty = every CSV in data_dir
    std::vector<Technique> techniques{kAllTechniques.begin(), kAllTechniques.end()};
    std::vector<MetricSetMode> metric_sets{MetricSetMode::AllMetrics,
                                           MetricSetMode::SelectedMetrics};
    std::size_t k_folds = 10;
    std::uint64_t master_seed = 20170129;
    double alpha = 0.05;
    CostColumn cost_preset = CostColumn::Mean;
    double m_p = 0.5;
    double c_setup = 0.0;
    NormalizeMode normalize = NormalizeMode::PerFold;
    bool include_large = false; // prop-1..prop-5
    int jobs = 1;

    std::string to_json() const;
    static ExperimentConfig from_json(std::string_view text);

    /// JSON (object or a manifest with a "config" key) or flat `key = value`
    /// lines.
    static ExperimentConfig load(const std::filesystem::path& path);
};

struct DatasetEntry {
    std::string name;
    bool loaded = false;
    std::string skip_reason;
    DatasetSummary summary;
    SelectedMetricSet selection; // the SM set
    std::string selection_json;
};

struct CellResult {
    std::string dataset;
    Technique technique{};
    MetricSetMode metric_set{};
    bool skipped = true;
    std::string skip_reason;
    PerformanceReport report;
    std::array<CostReport, 3> costs{}; // indexed by kAllScenarios order
};

struct ThresholdRow {
    std::string label; // technique or metric-set name
    EfficiencyScenario scenario{};
    std::size_t n_points = 0;
    bool fitted = false;
    std::string note;
    ThresholdModel model{};
};

struct RunBundle {
    ExperimentConfig config;
    std::vector<DatasetEntry> datasets;
    std::vector<CellResult> cells;
    std::optional<ComparisonMatrix> technique_accuracy;
    std::optional<ComparisonMatrix> technique_f_measure;
    std::optional<ComparisonMatrix> metric_set_accuracy;
    std::optional<ComparisonMatrix> metric_set_f_measure;
    std::vector<ThresholdRow> thresholds;
    std::string manifest_json;

    const CellResult* find_cell(std::string_view dataset, Technique t, MetricSetMode m) const;
};

/// Runs the full study: per-dataset metric validation, cross validated
/// evaluation of every configured (dataset, technique, metric set) cell,
/// cost reports under the three efficiency scenarios, threshold fits, and
/// the pairwise statistical comparisons. Per-cell failures become recorded
/// skips, never an aborted bundle.
RunBundle run_experiment(const ExperimentConfig& cfg);

/// Writes the bundle's report files (summary CSV, per-cell JSON, comparison
/// matrices, thresholds, boxplot data, manifest) into out_dir. Files are
/// staged and renamed so a failure never leaves a partial report behind.
void emit_reports(const RunBundle& bundle, const std::filesystem::path& out_dir);

/// Rebuilds the two pairwise comparisons from an existing summary.csv.
struct ComparisonSet {
    std::optional<ComparisonMatrix> technique_accuracy;
    std::optional<ComparisonMatrix> technique_f_measure;
    std::optional<ComparisonMatrix> metric_set_accuracy;
    std::optional<ComparisonMatrix> metric_set_f_measure;
};
ComparisonSet compare_from_summary_csv(const std::filesystem::path& summary_csv, double alpha);

} // namespace faultpred

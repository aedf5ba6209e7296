#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultpred/matrix.hpp"

namespace faultpred {

/// The fixed 20-metric predictor catalog. Order is fixed for the life of a
/// run; every MetricRecord's value vector is aligned to it.
std::span<const std::string_view> metric_catalog();

/// Index of a metric in the catalog, matching case-insensitively and
/// treating '-' and '_' as equivalent (PROMISE exports write avg_cc for
/// AVG-CC). Empty when the name is not a catalog metric.
std::optional<std::size_t> metric_index(std::string_view name);

struct MetricRecord {
    std::string class_id;
    std::vector<double> values; // aligned to metric_catalog()
    int label = 0;              // faulty = 1, non-faulty = 0
};

struct Dataset {
    std::string name;
    std::vector<MetricRecord> records;
    bool normalized = false;
    std::vector<std::string> warnings;

    std::size_t size() const { return records.size(); }
    std::size_t faulty_count() const;
    double faulty_percent() const;

    /// Labels as a dense vector, record order preserved.
    std::vector<int> labels() const;

    /// Feature matrix restricted to the given catalog column indices.
    Matrix to_matrix(std::span<const std::size_t> metric_indices) const;
    Matrix to_matrix() const;
};

struct DatasetSummary {
    std::size_t n_classes = 0;
    std::size_t n_faulty = 0;
    double faulty_percent = 0.0; // rounded to 2 decimals
};

/// Loads a PROMISE-style class-level CSV. The header must name the 20
/// catalog metrics and a label column ("bug" fault counts or "fault" 0/1);
/// extra columns are ignored. Bug counts above 0 collapse to label 1.
Dataset load_dataset(const std::filesystem::path& path);

/// Min-max scaler fit on one set of rows and applied to others. Constant
/// columns map to 0. Used both for whole-dataset normalization and for
/// leak-free per-fold normalization with clamping.
class MinMaxScaler {
public:
    void fit(const Matrix& x);

    /// Transforms in place; when `clamp` is set, values outside [0,1] are
    /// clamped and counted. Returns the number of clamped cells.
    std::size_t transform(Matrix& x, bool clamp) const;

    /// Column indices with max == min at fit time.
    const std::vector<std::size_t>& constant_columns() const { return constant_; }

    bool fitted() const { return !min_.empty(); }

private:
    std::vector<double> min_;
    std::vector<double> range_;
    std::vector<std::size_t> constant_;
};

/// Maps every metric column onto [0,1] by (x - min) / (max - min).
/// Labels are untouched. Constant columns become all-0.0 and are recorded
/// as warnings on the returned dataset.
Dataset normalize(const Dataset& d);

DatasetSummary dataset_summary(const Dataset& d);

} // namespace faultpred

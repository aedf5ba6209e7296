#include "faultpred/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "faultpred/errors.hpp"
#include "csv.hpp"

namespace faultpred {

namespace {

constexpr std::array<std::string_view, 20> kCatalog = {
    "DIT", "WMC", "RFC",  "CBO", "LCOM",   "NOC",    "Ce",  "Ca",  "LCOM3", "NPM",
    "DAM", "MOA", "LOC",  "CAM", "MFA",    "CBM",    "AVG-CC", "MAX-CC", "AMC", "IC",
};

std::string normalize_name(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '-') c = '_';
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

using detail::split_csv_line;
using detail::trim;

} // namespace

std::span<const std::string_view> metric_catalog() {
    return kCatalog;
}

std::optional<std::size_t> metric_index(std::string_view name) {
    const std::string needle = normalize_name(name);
    for (std::size_t i = 0; i < kCatalog.size(); ++i) {
        if (normalize_name(kCatalog[i]) == needle) return i;
    }
    return std::nullopt;
}

std::size_t Dataset::faulty_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += (r.label == 1);
    return n;
}

double Dataset::faulty_percent() const {
    if (records.empty()) return 0.0;
    return 100.0 * static_cast<double>(faulty_count()) / static_cast<double>(records.size());
}

std::vector<int> Dataset::labels() const {
    std::vector<int> y;
    y.reserve(records.size());
    for (const auto& r : records) y.push_back(r.label);
    return y;
}

Matrix Dataset::to_matrix(std::span<const std::size_t> metric_indices) const {
    Matrix m(records.size(), metric_indices.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = 0; j < metric_indices.size(); ++j) {
            m(i, j) = records[i].values[metric_indices[j]];
        }
    }
    return m;
}

Matrix Dataset::to_matrix() const {
    std::vector<std::size_t> all(kCatalog.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return to_matrix(all);
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty dataset file: " + path.string());

    const std::vector<std::string> header = split_csv_line(line);
    std::array<int, 20> metric_col;
    metric_col.fill(-1);
    int label_col = -1;
    bool label_is_count = true;
    int id_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = normalize_name(trim(header[c]));
        if (auto idx = metric_index(name)) {
            metric_col[*idx] = static_cast<int>(c);
        } else if (name == "bug" || name == "bugs") {
            label_col = static_cast<int>(c);
            label_is_count = true;
        } else if (name == "fault" || name == "faulty") {
            label_col = static_cast<int>(c);
            label_is_count = false;
        } else if (name == "name" || name == "class" || name == "classname") {
            id_col = static_cast<int>(c); // last matching column wins
        }
    }
    for (std::size_t i = 0; i < kCatalog.size(); ++i) {
        if (metric_col[i] < 0) {
            throw SchemaError("missing metric column '" + std::string(kCatalog[i]) +
                              "' in " + path.string());
        }
    }
    if (label_col < 0) {
        throw SchemaError("missing label column ('bug' or 'fault') in " + path.string());
    }

    Dataset d;
    d.name = path.stem().string();
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        ++row_index;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        auto cell = [&](int col) -> const std::string& {
            static const std::string empty;
            return col >= 0 && static_cast<std::size_t>(col) < fields.size()
                       ? fields[static_cast<std::size_t>(col)]
                       : empty;
        };
        auto numeric = [&](int col, std::string_view what) -> double {
            const std::string raw = trim(cell(col));
            if (raw.empty()) {
                throw ParseError("empty " + std::string(what) + " cell at data row " +
                                 std::to_string(row_index) + " of " + path.string());
            }
            double v = 0.0;
            const char* begin = raw.data();
            const char* end = raw.data() + raw.size();
            auto [p, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc{} || p != end || !std::isfinite(v)) {
                throw ParseError("non-numeric " + std::string(what) + " value '" + raw +
                                 "' at data row " + std::to_string(row_index) + " of " +
                                 path.string());
            }
            return v;
        };

        MetricRecord rec;
        rec.class_id = id_col >= 0 ? trim(cell(id_col)) : std::to_string(row_index);
        if (rec.class_id.empty()) rec.class_id = std::to_string(row_index);
        rec.values.resize(kCatalog.size());
        for (std::size_t i = 0; i < kCatalog.size(); ++i) {
            rec.values[i] = numeric(metric_col[i], kCatalog[i]);
        }
        const double raw_label = numeric(label_col, "label");
        if (label_is_count) {
            if (raw_label < 0.0) {
                throw ParseError("negative bug count at data row " + std::to_string(row_index) +
                                 " of " + path.string());
            }
            rec.label = raw_label > 0.0 ? 1 : 0;
        } else {
            if (raw_label != 0.0 && raw_label != 1.0) {
                throw ParseError("fault label must be 0 or 1 at data row " +
                                 std::to_string(row_index) + " of " + path.string());
            }
            rec.label = static_cast<int>(raw_label);
        }
        d.records.push_back(std::move(rec));
    }

    if (d.records.size() < 2) {
        throw DegenerateDatasetError("dataset " + d.name + " has fewer than 2 records");
    }
    const std::size_t faulty = d.faulty_count();
    if (faulty == 0 || faulty == d.records.size()) {
        throw DegenerateDatasetError("dataset " + d.name +
                                     " is single-class (faulty count " + std::to_string(faulty) +
                                     " of " + std::to_string(d.records.size()) + ")");
    }
    return d;
}

void MinMaxScaler::fit(const Matrix& x) {
    min_.assign(x.cols, 0.0);
    range_.assign(x.cols, 0.0);
    constant_.clear();
    for (std::size_t j = 0; j < x.cols; ++j) {
        double lo = x(0, j), hi = x(0, j);
        for (std::size_t i = 1; i < x.rows; ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        min_[j] = lo;
        range_[j] = hi - lo;
        if (range_[j] == 0.0) constant_.push_back(j);
    }
}

std::size_t MinMaxScaler::transform(Matrix& x, bool clamp) const {
    if (x.cols != min_.size()) throw ParameterError("MinMaxScaler: column count mismatch");
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            double v = range_[j] == 0.0 ? 0.0 : (x(i, j) - min_[j]) / range_[j];
            if (clamp && (v < 0.0 || v > 1.0)) {
                v = std::clamp(v, 0.0, 1.0);
                ++clamped;
            }
            x(i, j) = v;
        }
    }
    return clamped;
}

Dataset normalize(const Dataset& d) {
    if (d.normalized) throw ParameterError("normalize: dataset '" + d.name + "' is already normalized");
    if (d.records.empty()) throw ParameterError("normalize: empty dataset");

    Matrix x = d.to_matrix();
    MinMaxScaler scaler;
    scaler.fit(x);
    scaler.transform(x, /*clamp=*/false);

    Dataset out = d;
    out.normalized = true;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        for (std::size_t j = 0; j < kCatalog.size(); ++j) {
            out.records[i].values[j] = x(i, j);
        }
    }
    for (std::size_t j : scaler.constant_columns()) {
        out.warnings.push_back("constant metric column '" + std::string(kCatalog[j]) +
                               "' mapped to 0.0");
    }
    return out;
}

DatasetSummary dataset_summary(const Dataset& d) {
    DatasetSummary s;
    s.n_classes = d.records.size();
    s.n_faulty = d.faulty_count();
    s.faulty_percent = std::round(d.faulty_percent() * 100.0) / 100.0;
    return s;
}

} // namespace faultpred

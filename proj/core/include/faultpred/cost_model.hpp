#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "faultpred/confusion.hpp"

namespace faultpred {

/// Published per-defect removal cost columns (staff-hours).
enum class CostColumn { Min, Max, Mean, Median };

/// Published fault-identification efficiency rows for (unit, integration,
/// system) testing: Low = the minimum column, Medium = the median column,
/// High = the maximum column.
enum class EfficiencyScenario { Low, Medium, High };

std::string_view to_string(CostColumn c);
std::string_view to_string(EfficiencyScenario s);
std::optional<CostColumn> cost_column_from_string(std::string_view name);
std::optional<EfficiencyScenario> efficiency_scenario_from_string(std::string_view name);

inline constexpr std::array<EfficiencyScenario, 3> kAllScenarios = {
    EfficiencyScenario::Low, EfficiencyScenario::Medium, EfficiencyScenario::High};

struct CostParameters {
    double c_setup = 0.0;       // initial setup cost of the prediction technique
    double c_unit = 0.0;        // staff-hours per defect, unit testing
    double c_integration = 0.0;
    double c_system = 0.0;
    double c_field = 0.0;
    double delta_u = 0.0; // fault identification efficiencies in [0,1]
    double delta_i = 0.0;
    double delta_s = 0.0;
    double m_p = 0.5; // fraction of classes unit tested without prediction

    void validate() const;
};

/// Parameters from the published preset tables. The defaults elsewhere are
/// Mean costs with Median efficiencies.
CostParameters make_cost_parameters(CostColumn costs, EfficiencyScenario efficiencies,
                                    double m_p = 0.5, double c_setup = 0.0);

/// The preset tables as CSV, byte-for-byte what ships in data/.
std::string_view cost_presets_csv();

/// Estimated fault removal cost with prediction: unit testing of every
/// flagged class plus the residual integration/system/field chain over
/// faults that escape earlier phases.
double ecost(const ConfusionMatrix& cm, const CostParameters& p);

/// Estimated cost without prediction: unit testing a fraction m_p of all
/// classes plus the same residual chain over every fault.
double tcost(std::uint64_t total_classes, std::uint64_t faulty_classes, const CostParameters& p);

struct CostReport {
    double ecost = 0.0;
    double tcost = 0.0;
    double necost = 0.0;
    bool useful = false; // necost < 1
};

CostReport necost(const ConfusionMatrix& cm, std::uint64_t total_classes,
                  std::uint64_t faulty_classes, const CostParameters& p);

struct ThresholdPoint {
    double faulty_percent = 0.0;
    bool useful = false;
};

struct ThresholdModel {
    double constant = 0.0;
    double coefficient = 0.0;
    double threshold_percent = 0.0; // -constant/coefficient when coefficient > 0
    bool separated = false;
};

/// Univariate logit of not-useful on faulty percentage; the threshold solves
/// fitted probability = 0.5. Perfectly separated inputs report the midpoint
/// between the extreme separable percentages, flagged.
ThresholdModel fit_threshold(std::span<const ThresholdPoint> points);

} // namespace faultpred

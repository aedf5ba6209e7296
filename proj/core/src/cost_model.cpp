#include "faultpred/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "faultpred/errors.hpp"
#include "faultpred/learners.hpp"
#include "faultpred/matrix.hpp"

namespace faultpred {

namespace {

// Removal costs of test techniques (staff-hours per defect):
//                              min    max    mean   median
constexpr double kUnit[4] = {1.5, 6.0, 3.46, 2.5};
constexpr double kIntegration[4] = {3.06, 9.5, 5.42, 4.55};
constexpr double kSystem[4] = {2.82, 20.0, 8.37, 6.2};
constexpr double kField[4] = {3.9, 66.6, 27.24, 27.0};

// Fault identification efficiencies (unit, integration, system):
//                               min    max    median
constexpr double kDeltaU[3] = {0.1, 0.5, 0.25};
constexpr double kDeltaI[3] = {0.25, 0.60, 0.45};
constexpr double kDeltaS[3] = {0.25, 0.65, 0.5};

constexpr std::string_view kPresetCsv =
    "table,type,min,max,mean,median\n"
    "removal_cost,unit,1.5,6,3.46,2.5\n"
    "removal_cost,integration,3.06,9.5,5.42,4.55\n"
    "removal_cost,system,2.82,20,8.37,6.2\n"
    "removal_cost,field,3.9,66.6,27.24,27\n"
    "efficiency,unit,0.1,0.5,,0.25\n"
    "efficiency,integration,0.25,0.60,,0.45\n"
    "efficiency,system,0.25,0.65,,0.5\n";

std::size_t column_index(CostColumn c) {
    switch (c) {
        case CostColumn::Min: return 0;
        case CostColumn::Max: return 1;
        case CostColumn::Mean: return 2;
        case CostColumn::Median: return 3;
    }
    throw ParameterError("unknown cost column");
}

std::size_t scenario_index(EfficiencyScenario s) {
    switch (s) {
        case EfficiencyScenario::Low: return 0;    // minimum efficiencies
        case EfficiencyScenario::High: return 1;   // maximum efficiencies
        case EfficiencyScenario::Medium: return 2; // median efficiencies
    }
    throw ParameterError("unknown efficiency scenario");
}

/// Residual post-unit removal cost per escaped fault.
double residual_chain(double faults, const CostParameters& p) {
    return p.delta_i * p.c_integration * faults +
           p.delta_s * p.c_system * (1.0 - p.delta_i) * faults +
           (1.0 - p.delta_s) * p.c_field * (1.0 - p.delta_i) * faults;
}

} // namespace

std::string_view to_string(CostColumn c) {
    switch (c) {
        case CostColumn::Min: return "min";
        case CostColumn::Max: return "max";
        case CostColumn::Mean: return "mean";
        case CostColumn::Median: return "median";
    }
    return "?";
}

std::string_view to_string(EfficiencyScenario s) {
    switch (s) {
        case EfficiencyScenario::Low: return "low";
        case EfficiencyScenario::Medium: return "medium";
        case EfficiencyScenario::High: return "high";
    }
    return "?";
}

std::optional<CostColumn> cost_column_from_string(std::string_view name) {
    for (CostColumn c : {CostColumn::Min, CostColumn::Max, CostColumn::Mean, CostColumn::Median}) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<EfficiencyScenario> efficiency_scenario_from_string(std::string_view name) {
    for (EfficiencyScenario s : kAllScenarios) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

void CostParameters::validate() const {
    if (c_setup < 0 || c_unit < 0 || c_integration < 0 || c_system < 0 || c_field < 0) {
        throw ParameterError("cost parameters must be non-negative");
    }
    for (double d : {delta_u, delta_i, delta_s}) {
        if (d < 0.0 || d > 1.0) throw ParameterError("efficiencies must lie in [0,1]");
    }
    if (m_p < 0.0 || m_p > 1.0) throw ParameterError("m_p must lie in [0,1]");
}

CostParameters make_cost_parameters(CostColumn costs, EfficiencyScenario efficiencies, double m_p,
                                    double c_setup) {
    const std::size_t c = column_index(costs);
    const std::size_t s = scenario_index(efficiencies);
    CostParameters p;
    p.c_setup = c_setup;
    p.c_unit = kUnit[c];
    p.c_integration = kIntegration[c];
    p.c_system = kSystem[c];
    p.c_field = kField[c];
    p.delta_u = kDeltaU[s];
    p.delta_i = kDeltaI[s];
    p.delta_s = kDeltaS[s];
    p.m_p = m_p;
    p.validate();
    return p;
}

std::string_view cost_presets_csv() { return kPresetCsv; }

double ecost(const ConfusionMatrix& cm, const CostParameters& p) {
    p.validate();
    const double tp = static_cast<double>(cm.tp);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double escaped = tp * (1.0 - p.delta_u) + fn;
    return p.c_setup + p.c_unit * (tp + fp) + residual_chain(escaped, p);
}

double tcost(std::uint64_t total_classes, std::uint64_t faulty_classes, const CostParameters& p) {
    p.validate();
    if (faulty_classes > total_classes) {
        throw ParameterError("tcost: faulty_classes exceeds total_classes");
    }
    const double escaped = (1.0 - p.delta_u) * static_cast<double>(faulty_classes);
    return p.m_p * p.c_unit * static_cast<double>(total_classes) + residual_chain(escaped, p);
}

CostReport necost(const ConfusionMatrix& cm, std::uint64_t total_classes,
                  std::uint64_t faulty_classes, const CostParameters& p) {
    CostReport r;
    r.ecost = ecost(cm, p);
    r.tcost = tcost(total_classes, faulty_classes, p);
    if (r.tcost <= 0.0) throw UndefinedMeasureError("necost undefined: tcost is zero");
    r.necost = r.ecost / r.tcost;
    r.useful = r.necost < 1.0;
    return r;
}

ThresholdModel fit_threshold(std::span<const ThresholdPoint> points) {
    if (points.size() < 2) throw ParameterError("fit_threshold: need at least 2 points");
    bool any_useful = false, any_not = false;
    for (const auto& pt : points) (pt.useful ? any_useful : any_not) = true;
    if (!any_useful || !any_not) {
        throw ParameterError("fit_threshold: both outcomes must be present");
    }

    Matrix x(points.size(), 1);
    std::vector<int> y(points.size()); // 1 = not useful
    for (std::size_t i = 0; i < points.size(); ++i) {
        x(i, 0) = points[i].faulty_percent;
        y[i] = points[i].useful ? 0 : 1;
    }
    const LogisticFit fit = fit_logistic_irls(x, y, 1e-10, 200, 1e-6);

    ThresholdModel m;
    m.constant = fit.beta[0];
    m.coefficient = fit.beta[1];
    m.separated = fit.separated;
    if (m.separated) {
        // All useful points below all not-useful points: report the midpoint
        // of the separating gap.
        double max_useful = -std::numeric_limits<double>::infinity();
        double min_not = std::numeric_limits<double>::infinity();
        for (const auto& pt : points) {
            if (pt.useful) {
                max_useful = std::max(max_useful, pt.faulty_percent);
            } else {
                min_not = std::min(min_not, pt.faulty_percent);
            }
        }
        m.threshold_percent = 0.5 * (max_useful + min_not);
    } else if (m.coefficient != 0.0) {
        m.threshold_percent = -m.constant / m.coefficient;
    } else {
        m.threshold_percent = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

} // namespace faultpred

#include "faultpred/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"

namespace faultpred {

namespace {

constexpr ProjectShape kDesk[] = {
    {"ant-1.3", 125, 20},      {"ant-1.4", 178, 40},      {"ant-1.5", 293, 32},
    {"ant-1.6", 351, 92},      {"ant-1.7", 745, 166},     {"arc", 234, 27},
    {"berek", 43, 16},         {"camel-1.0", 339, 13},    {"camel-1.2", 608, 216},
    {"camel-1.4", 872, 145},   {"camel-1.6", 965, 188},   {"e-learning", 64, 5},
    {"ivy-1.1", 111, 63},      {"ivy-1.4", 241, 16},      {"ivy-2.0", 352, 40},
    {"jedit-3.2", 272, 90},    {"jedit-4.0", 306, 75},    {"jedit-4.1", 312, 79},
    {"jedit-4.2", 367, 48},    {"kalkulator", 27, 6},     {"log4j-1.0", 135, 34},
    {"log4j-1.1", 109, 37},    {"log4j-1.2", 205, 189},   {"lucene-2.0", 195, 91},
    {"lucene-2.2", 247, 144},  {"lucene-2.4", 340, 203},  {"pdftranslator", 33, 15},
    {"prop-6", 660, 66},       {"redaktor", 176, 27},     {"serapion", 45, 9},
    {"synapse-1.0", 157, 16},  {"synapse-1.1", 222, 60},  {"synapse-1.2", 256, 86},
    {"termoproject", 42, 13},  {"velocity-1.5", 214, 142},{"velocity-1.6", 229, 78},
    {"xerces-1.2", 440, 71},   {"xerces-1.3", 453, 69},   {"xerces-1.4", 588, 437},
    {"xerces-init", 162, 77},
};

constexpr ProjectShape kLarge[] = {
    {"prop-1", 18471, 2738}, {"prop-2", 23014, 2431}, {"prop-3", 10274, 1180},
    {"prop-4", 8718, 840},   {"prop-5", 8516, 1299},
};

int poisson(Rng& rng, double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.next_double();
    } while (p > limit);
    return k - 1;
}

struct RawClass {
    double wmc, dit, noc, cbo, rfc, lcom, ca, ce, npm, lcom3;
    double loc, dam, moa, mfa, cam, ic, cbm, amc, max_cc, avg_cc;
};

RawClass draw_class(Rng& rng) {
    RawClass c{};
    const double s = std::exp(rng.normal(0.0, 0.9)); // size/complexity scale
    auto jitter = [&](double sigma) { return std::exp(rng.normal(0.0, sigma)); };

    c.wmc = std::round(1.0 + 9.0 * s * jitter(0.35));
    c.loc = std::round(8.0 + 110.0 * s * jitter(0.45));
    c.rfc = std::round(2.0 + 14.0 * std::pow(s, 0.9) * jitter(0.40));
    c.cbo = std::round(1.0 + 6.0 * std::pow(s, 0.7) * jitter(0.45));
    c.ca = std::round(3.5 * std::pow(s, 0.4) * jitter(0.80));
    c.ce = std::round(1.0 + 4.0 * std::pow(s, 0.5) * jitter(0.50));
    c.lcom = std::round(0.5 * c.wmc * c.wmc * rng.uniform(0.0, 1.0));
    c.npm = std::round(c.wmc * rng.uniform(0.4, 1.0));
    c.amc = c.loc / std::max(1.0, c.wmc) * rng.uniform(0.6, 1.2);
    c.max_cc = std::round(1.0 + 3.5 * s * jitter(0.5));
    c.avg_cc = c.max_cc * rng.uniform(0.3, 0.8);

    // The rest carry no fault signal at all.
    c.dit = 1.0 + poisson(rng, 1.2);
    c.noc = poisson(rng, 0.3);
    c.lcom3 = rng.uniform(0.0, 2.0);
    c.dam = rng.uniform(0.0, 1.0);
    c.moa = poisson(rng, 0.8);
    c.mfa = rng.uniform(0.0, 1.0);
    c.cam = std::clamp(1.0 / (1.0 + 0.08 * c.wmc) + rng.normal(0.0, 0.1), 0.0, 1.0);
    c.ic = poisson(rng, 0.4);
    c.cbm = c.ic > 0 ? c.ic + poisson(rng, 0.5) : 0.0;
    return c;
}

double standardized_log(double v, double mean_log, double sd_log) {
    return sd_log > 0.0 ? (std::log1p(v) - mean_log) / sd_log : 0.0;
}

} // namespace

std::span<const ProjectShape> desk_projects() { return kDesk; }
std::span<const ProjectShape> large_projects() { return kLarge; }

std::string synthetic_dataset_csv(const ProjectShape& shape, std::uint64_t seed,
                                  const SynthParams& params) {
    if (shape.classes < 2 || shape.faulty < 1 || shape.faulty >= shape.classes) {
        throw ParameterError("synthetic_dataset_csv: unusable project shape");
    }
    const std::size_t n = static_cast<std::size_t>(shape.classes);
    Rng rng(seed);

    std::vector<RawClass> classes(n);
    for (auto& c : classes) c = draw_class(rng);

    // Risk score from the five signal metrics, standardized on the log
    // scale within the dataset so every project is comparably learnable.
    auto log_moments = [&](auto getter) {
        std::vector<double> logs(n);
        for (std::size_t i = 0; i < n; ++i) logs[i] = std::log1p(getter(classes[i]));
        const double m = mean(logs);
        const double sd = std::sqrt(sample_variance(logs));
        return std::pair<double, double>(m, sd);
    };
    const auto m_wmc = log_moments([](const RawClass& c) { return c.wmc; });
    const auto m_cbo = log_moments([](const RawClass& c) { return c.cbo; });
    const auto m_rfc = log_moments([](const RawClass& c) { return c.rfc; });
    const auto m_lcom = log_moments([](const RawClass& c) { return c.lcom; });
    const auto m_ca = log_moments([](const RawClass& c) { return c.ca; });

    std::vector<double> risk(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RawClass& c = classes[i];
        const double zw = standardized_log(c.wmc, m_wmc.first, m_wmc.second);
        const double zc = standardized_log(c.cbo, m_cbo.first, m_cbo.second);
        const double zr = standardized_log(c.rfc, m_rfc.first, m_rfc.second);
        const double zl = standardized_log(c.lcom, m_lcom.first, m_lcom.second);
        const double za = standardized_log(c.ca, m_ca.first, m_ca.second);
        risk[i] = 1.0 * zw + 0.9 * zc + 0.8 * zr + 0.6 * zl + 0.5 * za +
                  params.interaction * zw * zc;
    }
    const double risk_mean = mean(risk);
    const double risk_sd = std::sqrt(sample_variance(risk));
    std::vector<double> noisy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = risk_sd > 0.0 ? (risk[i] - risk_mean) / risk_sd : 0.0;
        noisy[i] = z + params.noise_sigma * rng.normal();
    }

    // Exactly `faulty` classes: the top of the noisy risk ranking.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return noisy[a] > noisy[b]; });
    std::vector<int> bugs(n, 0);
    for (int i = 0; i < shape.faulty; ++i) {
        bugs[order[static_cast<std::size_t>(i)]] = 1 + poisson(rng, 0.5);
    }

    std::string out;
    out.reserve(n * 140);
    out += "name,wmc,dit,noc,cbo,rfc,lcom,ca,ce,npm,lcom3,loc,dam,moa,mfa,cam,ic,cbm,amc,max_cc,avg_cc,bug\n";
    char line[512];
    for (std::size_t i = 0; i < n; ++i) {
        const RawClass& c = classes[i];
        std::snprintf(line, sizeof line,
                      "%s.C%zu,%.0f,%.0f,%.0f,%.0f,%.0f,%.0f,%.0f,%.0f,%.0f,%.4f,%.0f,%.4f,%.0f,"
                      "%.4f,%.4f,%.0f,%.0f,%.4f,%.0f,%.4f,%d\n",
                      std::string(shape.name).c_str(), i + 1, c.wmc, c.dit, c.noc, c.cbo, c.rfc,
                      c.lcom, c.ca, c.ce, c.npm, c.lcom3, c.loc, c.dam, c.moa, c.mfa, c.cam, c.ic,
                      c.cbm, c.amc, c.max_cc, c.avg_cc, bugs[i]);
        out += line;
    }
    return out;
}

void write_synthetic_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                            const SynthParams& params, bool include_large) {
    std::filesystem::create_directories(dir);
    auto write_one = [&](const ProjectShape& shape) {
        const std::string csv =
            synthetic_dataset_csv(shape, derive_seed(seed, "synth", shape.name), params);
        std::ofstream out(dir / (std::string(shape.name) + ".csv"), std::ios::binary);
        if (!out) throw IoError("cannot write synthetic dataset into " + dir.string());
        out << csv;
    };
    for (const ProjectShape& shape : kDesk) write_one(shape);
    if (include_large) {
        for (const ProjectShape& shape : kLarge) write_one(shape);
    }
}

} // namespace faultpred

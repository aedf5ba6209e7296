#include "faultpred/ensembles.hpp"

#include <nlohmann/json.hpp>

#include "faultpred/confusion.hpp"
#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"

namespace faultpred {

using nlohmann::json;

std::string_view to_string(EnsembleRule rule) {
    switch (rule) {
        case EnsembleRule::Bte: return "BTE";
        case EnsembleRule::Mve: return "MVE";
        case EnsembleRule::Ndtf: return "NDTF";
    }
    return "?";
}

EnsembleSpec EnsembleSpec::defaults(EnsembleRule rule, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.rule = rule;
    spec.seed = seed;
    for (std::size_t i = 0; i < kBaseRoster.size(); ++i) {
        spec.base_specs[i].kind = kBaseRoster[i];
        spec.base_specs[i].seed = derive_seed(seed, "base", to_string(kBaseRoster[i]));
    }
    spec.meta_spec.kind = LearnerKind::Dtf;
    spec.meta_spec.seed = derive_seed(seed, "ndtf-meta");
    return spec;
}

BaseSet train_base_set(const Matrix& x, const std::vector<int>& y,
                       std::span<const LearnerSpec, 5> specs) {
    for (std::size_t i = 0; i < kBaseRoster.size(); ++i) {
        if (specs[i].kind != kBaseRoster[i]) {
            throw ParameterError("train_base_set: spec order must match the roster");
        }
    }
    return {train_learner(x, y, specs[0]), train_learner(x, y, specs[1]),
            train_learner(x, y, specs[2]), train_learner(x, y, specs[3]),
            train_learner(x, y, specs[4])};
}

int predict_mve(const BaseSet& bases, std::span<const double> x) {
    int votes = 0;
    for (const TrainedModel& b : bases) votes += b.predict(x) ? 1 : 0;
    return votes * 2 > static_cast<int>(bases.size()) ? 1 : 0;
}

double EnsembleModel::score(std::span<const double> x) const {
    switch (rule) {
        case EnsembleRule::Bte:
            return bases[chosen_index].score(x);
        case EnsembleRule::Mve: {
            int votes = 0;
            for (const TrainedModel& b : bases) votes += b.predict(x) ? 1 : 0;
            return static_cast<double>(votes) / static_cast<double>(bases.size());
        }
        case EnsembleRule::Ndtf: {
            std::vector<double> meta_features(bases.size());
            for (std::size_t i = 0; i < bases.size(); ++i) meta_features[i] = bases[i].score(x);
            return meta->score(meta_features);
        }
    }
    throw ParameterError("EnsembleModel::score: unknown rule");
}

namespace {

void fill_ensemble_training_scores(EnsembleModel& m, const Matrix& x, const std::vector<int>& y) {
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < x.rows; ++i) cm.add(m.predict(x.row(i)), y[i] == 1);
    m.training_accuracy = accuracy(cm);
    m.training_f_measure = f_measure(cm);
}

} // namespace

EnsembleModel assemble_bte(BaseSet bases, const Matrix& x, const std::vector<int>& y) {
    EnsembleModel m;
    m.rule = EnsembleRule::Bte;
    // Best training F-measure; ties break by training accuracy, then by
    // roster order (the strict > keeps the earliest).
    std::size_t best = 0;
    for (std::size_t i = 1; i < bases.size(); ++i) {
        const bool better = bases[i].training_f_measure > bases[best].training_f_measure ||
                            (bases[i].training_f_measure == bases[best].training_f_measure &&
                             bases[i].training_accuracy > bases[best].training_accuracy);
        if (better) best = i;
    }
    m.chosen_index = best;
    m.bases.assign(std::make_move_iterator(bases.begin()), std::make_move_iterator(bases.end()));
    fill_ensemble_training_scores(m, x, y);
    return m;
}

EnsembleModel assemble_mve(BaseSet bases, const Matrix& x, const std::vector<int>& y) {
    EnsembleModel m;
    m.rule = EnsembleRule::Mve;
    m.bases.assign(std::make_move_iterator(bases.begin()), std::make_move_iterator(bases.end()));
    fill_ensemble_training_scores(m, x, y);
    return m;
}

EnsembleModel assemble_ndtf(BaseSet bases, const Matrix& x, const std::vector<int>& y,
                            const LearnerSpec& meta_spec) {
    if (meta_spec.kind != LearnerKind::Dtf) {
        throw ParameterError("assemble_ndtf: meta learner must be a DTF");
    }
    // Meta features are the base scores on the same training split that
    // trained the bases.
    Matrix meta_x(x.rows, bases.size());
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t b = 0; b < bases.size(); ++b) {
            meta_x(i, b) = bases[b].score(x.row(i));
        }
    }
    EnsembleModel m;
    m.rule = EnsembleRule::Ndtf;
    m.meta = train_dtf(meta_x, y, meta_spec);
    m.bases.assign(std::make_move_iterator(bases.begin()), std::make_move_iterator(bases.end()));
    fill_ensemble_training_scores(m, x, y);
    return m;
}

EnsembleModel train_bte(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec) {
    return assemble_bte(train_base_set(x, y, spec.base_specs), x, y);
}

EnsembleModel train_mve(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec) {
    return assemble_mve(train_base_set(x, y, spec.base_specs), x, y);
}

EnsembleModel train_ndtf(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec) {
    return assemble_ndtf(train_base_set(x, y, spec.base_specs), x, y, spec.meta_spec);
}

EnsembleModel train_ensemble(const Matrix& x, const std::vector<int>& y, const EnsembleSpec& spec) {
    switch (spec.rule) {
        case EnsembleRule::Bte: return train_bte(x, y, spec);
        case EnsembleRule::Mve: return train_mve(x, y, spec);
        case EnsembleRule::Ndtf: return train_ndtf(x, y, spec);
    }
    throw ParameterError("train_ensemble: unknown rule");
}

std::string EnsembleModel::to_json() const {
    json j;
    j["format_version"] = 1;
    j["kind"] = to_string(rule);
    j["training"] = {{"accuracy", training_accuracy}, {"f_measure", training_f_measure}};
    if (rule == EnsembleRule::Bte) j["chosen_index"] = chosen_index;
    auto& base_docs = j["bases"] = json::array();
    for (const TrainedModel& b : bases) base_docs.push_back(json::parse(b.to_json()));
    if (meta) j["meta"] = json::parse(meta->to_json());
    return j.dump();
}

} // namespace faultpred

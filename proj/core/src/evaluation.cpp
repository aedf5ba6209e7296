#include "faultpred/evaluation.hpp"

#include <algorithm>

#include "faultpred/errors.hpp"
#include "faultpred/math.hpp"
#include "stratified.hpp"

namespace faultpred {

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw UndefinedMeasureError("accuracy undefined for zero total");
    return static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());
}

double f_measure(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw UndefinedMeasureError("f-measure undefined for zero total");
    if (cm.tp == 0) {
        return (cm.fp + cm.fn) == 0 ? 1.0 : 0.0;
    }
    return 2.0 * static_cast<double>(cm.tp) /
           static_cast<double>(2 * cm.tp + cm.fp + cm.fn);
}

FoldAssignment stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw ParameterError("stratified_kfold: k must be positive");
    if (k > d.size()) throw ParameterError("stratified_kfold: k exceeds the record count");
    const std::size_t faulty = d.faulty_count();
    if (faulty == 0 || faulty == d.size()) {
        throw ParameterError("stratified_kfold: each class needs at least one record");
    }
    Rng rng(seed);
    FoldAssignment a;
    a.seed = seed;
    a.folds = detail::stratified_partition(d.labels(), k, rng);
    return a;
}

PerformanceReport cross_validate(const Trainer& trainer,
                                 const std::vector<std::string>& metric_set, const Dataset& raw,
                                 std::size_t k, std::uint64_t seed, NormalizeMode mode) {
    std::vector<std::size_t> metric_idx;
    metric_idx.reserve(metric_set.size());
    for (const std::string& name : metric_set) {
        const auto idx = metric_index(name);
        if (!idx) throw ParameterError("cross_validate: unknown metric '" + name + "'");
        metric_idx.push_back(*idx);
    }
    if (metric_idx.empty()) throw ParameterError("cross_validate: empty metric set");

    const FoldAssignment assignment = stratified_kfold(raw, k, derive_seed(seed, "folds"));
    const Matrix all = raw.to_matrix(metric_idx);
    const std::vector<int> y = raw.labels();

    MinMaxScaler global_scaler;
    if (mode == NormalizeMode::Global) global_scaler.fit(all);

    PerformanceReport report;
    report.folds.resize(k);

    for (std::size_t f = 0; f < k; ++f) {
        FoldResult& fold = report.folds[f];
        const std::vector<std::size_t>& held = assignment.folds[f];
        if (held.empty()) {
            fold.skipped = true;
            fold.skip_reason = "empty fold";
            continue;
        }
        std::vector<char> is_held(raw.size(), 0);
        for (std::size_t i : held) is_held[i] = 1;

        Matrix train_x(raw.size() - held.size(), metric_idx.size());
        std::vector<int> train_y;
        train_y.reserve(train_x.rows);
        std::size_t r = 0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (is_held[i]) continue;
            std::copy(all.row(i).begin(), all.row(i).end(), train_x.row(r).begin());
            train_y.push_back(y[i]);
            ++r;
        }
        const std::size_t faulty_in_train =
            static_cast<std::size_t>(std::count(train_y.begin(), train_y.end(), 1));
        if (faulty_in_train == 0 || faulty_in_train == train_y.size()) {
            fold.skipped = true;
            fold.skip_reason = "training split missing a class";
            report.warnings.push_back("fold " + std::to_string(f) + " skipped: " + fold.skip_reason);
            report.skipped_records += held.size();
            continue;
        }

        Matrix test_x(held.size(), metric_idx.size());
        for (std::size_t i = 0; i < held.size(); ++i) {
            std::copy(all.row(held[i]).begin(), all.row(held[i]).end(), test_x.row(i).begin());
        }

        if (mode == NormalizeMode::PerFold) {
            MinMaxScaler scaler;
            scaler.fit(train_x);
            scaler.transform(train_x, /*clamp=*/false);
            fold.clamp_events = scaler.transform(test_x, /*clamp=*/true);
        } else {
            global_scaler.transform(train_x, /*clamp=*/false);
            global_scaler.transform(test_x, /*clamp=*/false);
        }

        const auto model = trainer(train_x, train_y, derive_seed(seed, "fold", static_cast<std::uint64_t>(f)));
        for (std::size_t i = 0; i < held.size(); ++i) {
            const bool predicted = model->score(test_x.row(i)) >= kDecisionThreshold;
            fold.cm.add(predicted, y[held[i]] == 1);
        }
        fold.accuracy = accuracy(fold.cm);
        fold.f_measure = f_measure(fold.cm);
        report.pooled += fold.cm;
        report.evaluated_records += held.size();
    }

    if (report.pooled.total() > 0) {
        report.pooled_accuracy = accuracy(report.pooled);
        report.pooled_f_measure = f_measure(report.pooled);
    }
    double acc_sum = 0.0, f_sum = 0.0;
    std::size_t scored = 0;
    for (const FoldResult& fr : report.folds) {
        if (fr.skipped) continue;
        acc_sum += fr.accuracy;
        f_sum += fr.f_measure;
        ++scored;
    }
    if (scored > 0) {
        report.fold_mean_accuracy = acc_sum / static_cast<double>(scored);
        report.fold_mean_f_measure = f_sum / static_cast<double>(scored);
    }
    return report;
}

} // namespace faultpred

#pragma once

#include <cstdint>

namespace faultpred {

/// Prediction-vs-actual counts: tp = faulty->faulty, fp = nonfaulty->faulty,
/// tn = nonfaulty->nonfaulty, fn = faulty->nonfaulty.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    void add(bool predicted_faulty, bool actually_faulty) {
        if (actually_faulty) {
            (predicted_faulty ? tp : fn)++;
        } else {
            (predicted_faulty ? fp : tn)++;
        }
    }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// (tn + tp) / total; throws UndefinedMeasureError when total is 0.
double accuracy(const ConfusionMatrix& cm);

/// 2tp / (2tp + fp + fn); 1.0 when tp = fp = fn = 0, 0.0 when tp = 0 with
/// errors present.
double f_measure(const ConfusionMatrix& cm);

} // namespace faultpred

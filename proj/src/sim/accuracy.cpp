#include "lava/sim/accuracy.hpp"

#include <algorithm>
#include <cmath>

#include "lava/predict/classify.hpp"

namespace lava {

void BinaryScores::add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
}

double BinaryScores::precision() const { return tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0; }

double BinaryScores::recall() const { return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0; }

double BinaryScores::f1() const {
    const std::size_t denom = 2 * tp + fp + fn;
    return denom ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 1.0;
}

std::array<BinaryScores, kUptimeQuantiles> uptime_quantile_accuracy(const LifetimeModel& model, const Trace& test,
                                                                    double threshold_s) {
    // Survivor-only strata predict totals that equal a capped lifetime up to
    // rounding; the relative slack keeps such totals on the long side.
    const double cut = threshold_s * (1.0 - 1e-12);
    std::array<BinaryScores, kUptimeQuantiles> out{};
    for (const TraceRecord& r : test) {
        const VmRecord vm = r.to_vm();
        const bool actual = static_cast<double>(r.lifetime_s) >= threshold_s;
        for (std::size_t q = 0; q < kUptimeQuantiles; ++q) {
            const double uptime = static_cast<double>(q) / static_cast<double>(kUptimeQuantiles) *
                                  static_cast<double>(r.lifetime_s);
            const double total = uptime + model.predict_remaining(vm, uptime);
            out[q].add(total >= cut, actual);
        }
    }
    return out;
}

LogErrorHistogram log_error_histogram(const LifetimeModel& model, const Trace& test) {
    LogErrorHistogram h;
    h.counts.assign(h.edges.size() + 1, 0);
    double sum = 0.0;
    for (const TraceRecord& r : test) {
        const double pred = std::max(model.predict_remaining(r.to_vm(), 0.0), 1.0);
        const double err = log_error(pred, static_cast<double>(r.lifetime_s));
        sum += err;
        const auto it = std::lower_bound(h.edges.begin(), h.edges.end(), err);
        ++h.counts[static_cast<std::size_t>(it - h.edges.begin())];
    }
    if (!test.empty()) h.mean = sum / static_cast<double>(test.size());
    return h;
}

}  // namespace lava

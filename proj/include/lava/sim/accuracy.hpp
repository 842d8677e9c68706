#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lava/predict/model.hpp"
#include "lava/workload/trace.hpp"

namespace lava {

struct BinaryScores {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    void add(bool predicted, bool actual);
    double precision() const;
    double recall() const;
    /// 1 when there are no positives at all (nothing to miss, nothing falsely flagged).
    double f1() const;
};

inline constexpr std::size_t kUptimeQuantiles = 20;
inline constexpr double kLongThresholdS = 604800.0;

/// For q in 0..19, queries each VM at uptime q/20 of its true lifetime and
/// classifies it long iff uptime + predicted remaining >= threshold.
std::array<BinaryScores, kUptimeQuantiles> uptime_quantile_accuracy(const LifetimeModel& model, const Trace& test,
                                                                    double threshold_s = kLongThresholdS);

struct LogErrorHistogram {
    /// Upper edges of the buckets in log10 units; the last bucket is open.
    std::vector<double> edges = {0.1, 0.25, 0.5, 1.0, 2.0};
    std::vector<std::size_t> counts;
    double mean = 0.0;
};

/// |log10(pred total) - log10(true total)| at uptime 0; predictions below
/// one second are clamped to one second.
LogErrorHistogram log_error_histogram(const LifetimeModel& model, const Trace& test);

}  // namespace lava

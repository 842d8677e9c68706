#pragma once

#include <memory>
#include <vector>

#include "lava/predict/classify.hpp"
#include "lava/sched/scheduler.hpp"

namespace lava {

enum class NilasPosition { AboveBinPacking, Highest };

struct NilasConfig {
    std::vector<SimTime> bucket_boundaries_s = {0,         30 * kMinute, 60 * kMinute, 90 * kMinute,
                                                2 * kHour, 3 * kHour,    4 * kHour,    6 * kHour,
                                                12 * kHour, 24 * kHour,  168 * kHour};
    NilasPosition position = NilasPosition::AboveBinPacking;

    void validate() const;
};

struct LavaConfig {
    double recycle_threshold = 0.90;
    double deadline_factor = 1.1;
    NilasConfig nilas;

    void validate() const;
};

/// Index i with boundary[i] <= delta < boundary[i+1]; the last index past the end.
int quantize_temporal_cost(double delta_t_s, const NilasConfig& cfg);

/// Temporal cost of adding a VM that exits at `vm_exit` to a host whose
/// current horizon is `host_exit`.
int temporal_cost(double vm_exit, double host_exit, const NilasConfig& cfg);

class BestFitScheduler final : public Scheduler {
public:
    Algorithm algorithm() const override { return Algorithm::BestFit; }
    ScoreVector score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const override;
};

/// One-shot short/long lifetime alignment. Host class follows the longest
/// remaining time among residents according to their creation-time predictions.
class LaBinaryScheduler final : public Scheduler {
public:
    explicit LaBinaryScheduler(double threshold_s = kBinaryThresholdS) : threshold_s_(threshold_s) {}

    Algorithm algorithm() const override { return Algorithm::LaBinary; }
    ScoreVector score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const override;

    BinaryClass vm_class(const VmRecord& vm, SimTime now) const;
    /// Class of a non-empty host at `now`.
    BinaryClass host_class(const HostRecord& host, const PoolState& pool, SimTime now) const;

private:
    double threshold_s_;
};

class NilasScheduler final : public Scheduler {
public:
    explicit NilasScheduler(NilasConfig cfg = {});

    Algorithm algorithm() const override { return Algorithm::Nilas; }
    ScoreVector score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const override;

    const NilasConfig& config() const { return cfg_; }

private:
    NilasConfig cfg_;
};

/// NILAS score vector without the business component:
/// {empty, temporal cost, best fit}.
ScoreVector score_nilas(const HostRecord& host, const VmRecord& vm, SchedContext& ctx, const NilasConfig& cfg);

class LavaScheduler final : public Scheduler {
public:
    explicit LavaScheduler(LavaConfig cfg = {});

    Algorithm algorithm() const override { return Algorithm::Lava; }
    void on_arrival(VmRecord& vm, SchedContext& ctx) const override;
    void on_reschedule(VmRecord& vm, SchedContext& ctx) const override;
    ScoreVector score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const override;

    void after_place(HostRecord& host, VmRecord& vm, SchedContext& ctx) const override;
    void after_remove(HostRecord& host, SchedContext& ctx) const override;
    void on_deadline(HostRecord& host, SchedContext& ctx) const override;

    const LavaConfig& config() const { return cfg_; }

    /// Preference tier of a host for a VM: 0 recycling of a longer class,
    /// 1 open of the same class, 2 any other non-empty, 3 empty.
    static int tier(const HostRecord& host, LifetimeClass vm_class);

private:
    LavaConfig cfg_;
};

/// Host state transitions, exposed for direct testing.
void lava_after_place(HostRecord& host, VmRecord& vm, PoolState& pool, SimTime now, const LavaConfig& cfg);
void lava_on_exit(HostRecord& host, PoolState& pool, SimTime now, const LavaConfig& cfg);
void lava_on_deadline(HostRecord& host, PoolState& pool, SimTime now, const LavaConfig& cfg);

struct SchedulerOptions {
    NilasConfig nilas;
    LavaConfig lava;
    double la_binary_threshold_s = kBinaryThresholdS;
};

std::unique_ptr<Scheduler> make_scheduler(Algorithm algo, const SchedulerOptions& opts = {});

}  // namespace lava

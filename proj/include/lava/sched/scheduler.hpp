#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lava/core/pool.hpp"
#include "lava/predict/cache.hpp"
#include "lava/predict/model.hpp"
#include "lava/sched/score.hpp"

namespace lava {

class NoFeasibleHost : public Error {
public:
    using Error::Error;
};

/// Everything a policy may consult when scoring one placement.
struct SchedContext {
    PoolState& pool;
    const LifetimeModel& model;
    PredictionCache& cache;
    SimTime now;
};

/// Synthetic score ranked above all bin-packing concerns (stands in for
/// business objectives such as failure-domain spreading).
using BusinessScore = std::function<std::int64_t(const HostRecord&, const VmRecord&)>;

enum class Algorithm { BestFit, LaBinary, Nilas, Lava };

std::string_view to_string(Algorithm a);
/// Accepts "baseline"/"best-fit", "la-binary", "nilas", "lava".
Algorithm parse_algorithm(std::string_view name);

class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual Algorithm algorithm() const = 0;
    std::string_view name() const { return to_string(algorithm()); }

    /// Records the creation-time prediction and the first reprediction.
    virtual void on_arrival(VmRecord& vm, SchedContext& ctx) const;
    /// Repredicts a live VM that is about to be placed again (migration).
    virtual void on_reschedule(VmRecord& vm, SchedContext& ctx) const;

    /// Score of a feasible host; lower is better.
    virtual ScoreVector score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const = 0;

    /// Feasible host with the minimal score, lowest id on ties; nullopt if none fits.
    std::optional<HostId> select(const VmRecord& vm, SchedContext& ctx) const;

    /// State hooks invoked by the engine after the pool changed.
    virtual void after_place(HostRecord&, VmRecord&, SchedContext&) const {}
    virtual void after_remove(HostRecord&, SchedContext&) const {}
    virtual void on_deadline(HostRecord&, SchedContext&) const {}

    void set_business_score(BusinessScore fn) { business_ = std::move(fn); }

protected:
    void push_business(ScoreVector& s, const HostRecord& host, const VmRecord& vm) const {
        if (business_) s.push(business_(host, vm));
    }

private:
    BusinessScore business_;
};

}  // namespace lava

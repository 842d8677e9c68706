#pragma once

#include <cstdint>
#include <string>

#include "lava/core/pool.hpp"
#include "lava/predict/cache.hpp"
#include "lava/predict/model.hpp"
#include "lava/sched/scheduler.hpp"
#include "lava/workload/trace.hpp"

namespace lava::test {

inline constexpr ResourceVec kHost = ResourceVec::cores_gib(96, 384);

/// VM with default features; times in seconds.
VmRecord vm(std::uint64_t id, ResourceVec shape, SimTime create, SimTime exit);

TraceRecord record(std::uint64_t id, SimTime create, SimTime lifetime, ResourceVec shape,
                   const std::string& category = "batch");

/// Pool, model and cache bundled so a SchedContext can be formed in one line.
struct Bench {
    PoolState pool;
    OracleModel oracle;
    PredictionCache cache{0};

    explicit Bench(std::size_t hosts, ResourceVec cap = kHost);

    SchedContext ctx(SimTime now);
    /// Registers the VM, runs the arrival hook and places it on `host`
    /// through the scheduler's after-place hook.
    VmRecord& put(const Scheduler& s, VmRecord v, HostId host, SimTime now);
    /// Registers the VM and runs the arrival hook without placing it.
    VmRecord& stage(const Scheduler& s, VmRecord v, SimTime now);
};

/// Default generated trace for `seed`, cached per process.
const Trace& default_trace(std::uint64_t seed);

/// FNV-1a over the bytes; used to compare rendered outputs.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace lava::test

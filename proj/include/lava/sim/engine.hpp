#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lava/defrag/defrag.hpp"
#include "lava/predict/model.hpp"
#include "lava/sched/policies.hpp"
#include "lava/sim/metrics.hpp"
#include "lava/workload/trace.hpp"

namespace lava {

enum class EventKind : std::uint8_t {
    VmExit = 0,
    MigrationEnd = 1,
    HostDeadline = 2,
    CacheRefresh = 3,
    VmArrival = 4,
    MigrationStart = 5,
    DefragCheck = 6,
    MetricSample = 7,
};

/// Events are ordered by (time, kind, key). `key` is canonical: the VM's
/// trace index for arrivals and exits, the host id for deadlines, and a
/// creation counter otherwise.
struct SimEvent {
    SimTime time = 0;
    EventKind kind = EventKind::MetricSample;
    std::uint64_t key = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;

    friend bool operator<(const SimEvent& x, const SimEvent& y) {
        if (x.time != y.time) return x.time < y.time;
        if (x.kind != y.kind) return x.kind < y.kind;
        return x.key < y.key;
    }
};

class TraceNotSorted : public Error {
public:
    using Error::Error;
};

struct SimConfig {
    std::size_t hosts = 50;
    ResourceVec host_capacity = ResourceVec::cores_gib(96, 384);
    /// false = cold start: VMs created before t = 0 are dropped and
    /// measurement starts at t = 0.
    bool warm_up = true;
    SimTime warm_up_s = 2 * kDay;
    SimTime sample_interval_s = 5 * kMinute;
    SimTime cache_refresh_s = 60;
    /// Stranding snapshots; 0 disables them.
    SimTime stranding_interval_s = 0;
    std::uint64_t stranding_seed = 7;
    /// Runs PoolState::check_invariants after every event.
    bool check_invariants = false;
    bool record_placements = false;
    Algorithm algorithm = Algorithm::BestFit;
    SchedulerOptions sched;
    DefragConfig defrag;

    void validate() const;
};

struct MetricSample {
    SimTime time = 0;
    MetricsSnapshot m;
    double optimal_empty_pct = 0.0;
    std::size_t num_vms = 0;
    double util_cpu = 0.0;
    double util_mem = 0.0;
};

struct StrandingSample {
    SimTime time = 0;
    StrandingResult r;
};

struct PlacementEntry {
    SimTime time = 0;
    VmId vm;
    std::optional<HostId> host;
    /// "warmup", "arrival" or "migration".
    std::string phase;
    std::string scheduler;
};

struct MetricSeries {
    std::vector<MetricSample> samples;
    std::vector<StrandingSample> stranding;
    std::size_t vms_seen = 0;
    std::size_t scheduling_failures = 0;
    std::size_t migrations = 0;
    std::size_t migrations_cancelled = 0;
    std::size_t migration_target_failures = 0;
    std::size_t deadline_promotions = 0;
    std::size_t invariant_checks = 0;
    SimTime measure_start = 0;
    SimTime measure_end = 0;
    std::vector<PlacementEntry> placements;
    std::vector<MigrationTask> migration_log;
    std::vector<EvacuationInstance> evacuations;

    /// Means over samples.
    double mean_empty_hosts_pct() const;
    double mean_empty_to_free() const;
    double mean_packing_density() const;
    double mean_optimal_empty_pct() const;
};

/// Replays a trace sorted by (create_time, id).
MetricSeries run_simulation(const Trace& trace, const LifetimeModel& model, const SimConfig& cfg);

}  // namespace lava

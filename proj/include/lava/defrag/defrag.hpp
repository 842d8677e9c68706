#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "lava/core/pool.hpp"
#include "lava/predict/model.hpp"

namespace lava {

enum class MigrationOrder { TraceOrder, Lars };

std::string_view to_string(MigrationOrder o);
/// "trace" or "lars".
MigrationOrder parse_migration_order(std::string_view s);

struct MigrationTask {
    VmId vm;
    HostId source;
    std::optional<HostId> target;
    SimTime enqueue_time = 0;
    std::optional<SimTime> start_time;
    std::optional<SimTime> end_time;
    /// The VM exited before a slot reached it.
    bool cancelled = false;
};

/// Logical migration slots; at most max_concurrent tasks are active.
class MigrationSlots {
public:
    explicit MigrationSlots(std::size_t max_concurrent = 3);

    bool available() const { return active_ < max_; }
    void acquire();
    void release();
    std::size_t active() const { return active_; }
    std::size_t max_concurrent() const { return max_; }

private:
    std::size_t max_;
    std::size_t active_ = 0;
};

struct DefragConfig {
    bool enabled = false;
    /// Defragmentation starts when the empty-host fraction drops below this.
    double empty_host_trigger = 0.10;
    std::size_t candidates_per_round = 2;
    MigrationOrder ordering = MigrationOrder::TraceOrder;
    std::size_t max_concurrent = 3;
    SimTime migration_duration_s = 20 * kMinute;
    SimTime check_interval_s = kHour;
    /// Eviction approval; VMs it rejects are left to exit in place.
    std::function<bool(const VmRecord&)> approve;

    void validate() const;
};

class NoFeasibleTarget : public Error {
public:
    using Error::Error;
};

class MismatchedRuns : public Error {
public:
    using Error::Error;
};

/// Non-empty hosts ranked by (fewest VMs, most free capacity, lowest id);
/// the first candidates_per_round are marked unavailable_for_scheduling.
std::vector<HostId> select_candidates(PoolState& pool, const DefragConfig& cfg);

/// Resident VMs by repredicted remaining lifetime, descending; ties by id.
std::vector<VmId> lars_order(const HostRecord& host, const PoolState& pool, const LifetimeModel& model, SimTime now);

/// Resident VMs in arrival order: (create_time, id).
std::vector<VmId> trace_order(const HostRecord& host, const PoolState& pool);

// --- Offline evacuation replay ----------------------------------------------

struct EvacuationVm {
    VmId id;
    SimTime create_time = 0;
    SimTime exit_time = 0;
    double predicted_remaining_s = 0.0;
};

/// One host's evacuation as observed in a simulation run.
struct EvacuationInstance {
    HostId host;
    SimTime start = 0;
    std::vector<EvacuationVm> vms;
};

struct EvacuationResult {
    std::size_t migrations = 0;
    std::size_t cancelled = 0;
    SimTime finish = 0;
    std::vector<MigrationTask> tasks;
};

std::vector<VmId> order_instance(const EvacuationInstance& inst, MigrationOrder order);

/// Replays the instance on a slot timeline: VMs are taken in `order`, each
/// starts at the earliest free slot, and a VM whose exit is at or before
/// that instant is cancelled instead of migrated.
EvacuationResult replay_evacuation(const EvacuationInstance& inst, const std::vector<VmId>& order,
                                   std::size_t max_concurrent, SimTime duration_s);
EvacuationResult replay_evacuation(const EvacuationInstance& inst, MigrationOrder order, std::size_t max_concurrent,
                                   SimTime duration_s);

struct OrderingReport {
    MigrationOrder ordering = MigrationOrder::TraceOrder;
    std::vector<EvacuationInstance> instances;
    std::vector<EvacuationResult> results;

    std::size_t migrations() const;
    std::size_t cancelled() const;
};

OrderingReport replay_all(const std::vector<EvacuationInstance>& instances, MigrationOrder order,
                          std::size_t max_concurrent, SimTime duration_s);

struct MigrationReduction {
    std::size_t baseline = 0;
    std::size_t lars = 0;
    /// 1 - lars / baseline; 0 when baseline is 0.
    double reduction = 0.0;
};

MigrationReduction migration_reduction(std::size_t baseline, std::size_t lars);

/// Throws MismatchedRuns unless both reports cover identical instances.
MigrationReduction count_saved_migrations(const OrderingReport& baseline, const OrderingReport& lars);

/// One line per task: vm, source, target, enqueue, start, end, cancelled.
void write_defrag_log(const std::vector<MigrationTask>& tasks, std::ostream& os);

}  // namespace lava

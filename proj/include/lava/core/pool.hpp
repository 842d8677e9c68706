#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "lava/core/resources.hpp"
#include "lava/core/types.hpp"
#include "lava/predict/features.hpp"

namespace lava {

struct VmRecord {
    VmId id;
    ResourceVec shape;
    FeatureVec features;
    SimTime create_time = 0;
    /// Ground truth; only oracle predictors and metrics may read it.
    SimTime true_exit_time = 0;
    std::optional<HostId> host;
    /// Exit time from the latest reprediction.
    double predicted_exit_time = 0.0;
    /// Exit time from the one-shot prediction made at creation.
    double initial_predicted_exit = 0.0;
    LifetimeClass lifetime_class = LifetimeClass::LC1;
    bool is_residual = false;

    double uptime(SimTime now) const { return static_cast<double>(now - create_time); }
    SimTime true_lifetime() const { return true_exit_time - create_time; }
};

enum class HostState : std::uint8_t { Empty, Open, Recycling };

const char* to_string(HostState s);

struct HostRecord {
    HostId id;
    ResourceVec capacity;
    /// Shapes of resident VMs plus outbound migration reservations.
    ResourceVec used;
    std::set<VmId> vms;
    HostState lava_state = HostState::Empty;
    std::optional<LifetimeClass> host_class;
    std::set<VmId> residual_vms;
    std::optional<SimTime> deadline;
    /// Bumped whenever the deadline is re-armed so stale timer events can be dropped.
    std::uint64_t deadline_generation = 0;
    bool unavailable_for_scheduling = false;
    /// Capacity still held on this host by VMs that migrated away but whose
    /// migration has not finished.
    std::map<VmId, ResourceVec> outbound;

    bool empty() const { return vms.empty() && outbound.empty(); }
    ResourceVec free() const { return capacity - used; }
};

/// True iff the shape fits the host's free capacity and the host accepts placements.
bool fits(const ResourceVec& vm_shape, const HostRecord& host);

class PoolState {
public:
    PoolState() = default;

    /// Creates `count` hosts with identical capacity, ids 0..count-1.
    static PoolState homogeneous(std::size_t count, ResourceVec capacity);

    HostId add_host(ResourceVec capacity);
    /// Registers an unplaced VM.
    VmRecord& add_vm(VmRecord vm);

    void place(VmId vm, HostId host);
    /// Unplaces a VM; the record stays registered until erase_vm.
    void remove(VmId vm);
    void erase_vm(VmId vm);

    /// Moves a placed VM to `target`, leaving an outbound reservation of its
    /// shape on the source host until release_outbound.
    void migrate(VmId vm, HostId target);
    void release_outbound(HostId host, VmId vm);

    HostRecord& host(HostId id);
    const HostRecord& host(HostId id) const;
    VmRecord& vm(VmId id);
    const VmRecord& vm(VmId id) const;
    bool has_vm(VmId id) const { return vms_.contains(id); }

    std::vector<HostRecord>& hosts() { return hosts_; }
    const std::vector<HostRecord>& hosts() const { return hosts_; }
    const std::unordered_map<VmId, VmRecord>& vms() const { return vms_; }

    SimTime now = 0;

    /// Throws Error if any pool invariant is violated.
    void check_invariants() const;

    std::size_t placed_vm_count() const { return placed_; }
    std::size_t empty_host_count() const;

private:
    std::vector<HostRecord> hosts_;
    std::unordered_map<VmId, VmRecord> vms_;
    std::size_t placed_ = 0;
};

}  // namespace lava

#include "lava/core/pool.hpp"

#include <sstream>
#include <string>

namespace lava {

std::string to_string(LifetimeClass c) { return "LC" + std::to_string(to_int(c)); }

const char* to_string(HostState s) {
    switch (s) {
        case HostState::Empty: return "empty";
        case HostState::Open: return "open";
        case HostState::Recycling: return "recycling";
    }
    return "?";
}

bool fits(const ResourceVec& vm_shape, const HostRecord& host) {
    return !host.unavailable_for_scheduling && fits_within(host.used + vm_shape, host.capacity);
}

PoolState PoolState::homogeneous(std::size_t count, ResourceVec capacity) {
    PoolState pool;
    for (std::size_t i = 0; i < count; ++i) pool.add_host(capacity);
    return pool;
}

HostId PoolState::add_host(ResourceVec capacity) {
    if (!capacity.non_negative()) throw InvalidArgument("host capacity must be non-negative");
    HostRecord h;
    h.id = HostId{hosts_.size()};
    h.capacity = capacity;
    hosts_.push_back(std::move(h));
    return hosts_.back().id;
}

VmRecord& PoolState::add_vm(VmRecord vm) {
    if (!vm.shape.non_negative()) throw InvalidArgument("VM shape must be non-negative");
    if (vm.true_exit_time <= vm.create_time) throw InvalidArgument("VM must exit after creation");
    vm.host.reset();
    auto [it, inserted] = vms_.emplace(vm.id, std::move(vm));
    if (!inserted) throw InvalidArgument("duplicate VM id " + std::to_string(it->first.value));
    return it->second;
}

HostRecord& PoolState::host(HostId id) {
    if (id.value >= hosts_.size()) throw InvalidArgument("unknown host " + std::to_string(id.value));
    return hosts_[id.value];
}

const HostRecord& PoolState::host(HostId id) const {
    if (id.value >= hosts_.size()) throw InvalidArgument("unknown host " + std::to_string(id.value));
    return hosts_[id.value];
}

VmRecord& PoolState::vm(VmId id) {
    auto it = vms_.find(id);
    if (it == vms_.end()) throw UnknownVm("unknown VM " + std::to_string(id.value));
    return it->second;
}

const VmRecord& PoolState::vm(VmId id) const {
    auto it = vms_.find(id);
    if (it == vms_.end()) throw UnknownVm("unknown VM " + std::to_string(id.value));
    return it->second;
}

void PoolState::place(VmId vm_id, HostId host_id) {
    VmRecord& v = vm(vm_id);
    HostRecord& h = host(host_id);
    if (v.host) throw CapacityExceeded("VM " + std::to_string(vm_id.value) + " is already placed");
    if (!fits(v.shape, h)) {
        std::ostringstream os;
        os << "VM " << vm_id << " " << v.shape << " does not fit host " << host_id;
        throw CapacityExceeded(os.str());
    }
    h.used += v.shape;
    h.vms.insert(vm_id);
    if (h.lava_state == HostState::Empty) h.lava_state = HostState::Open;
    v.host = host_id;
    ++placed_;
}

namespace {

void clear_if_vacant(HostRecord& h) {
    if (!h.vms.empty()) return;
    h.lava_state = HostState::Empty;
    h.host_class.reset();
    h.residual_vms.clear();
    h.deadline.reset();
    ++h.deadline_generation;
}

}  // namespace

void PoolState::remove(VmId vm_id) {
    auto it = vms_.find(vm_id);
    if (it == vms_.end() || !it->second.host) {
        throw UnknownVm("VM " + std::to_string(vm_id.value) + " is not placed");
    }
    VmRecord& v = it->second;
    HostRecord& h = host(*v.host);
    h.used -= v.shape;
    h.vms.erase(vm_id);
    h.residual_vms.erase(vm_id);
    v.is_residual = false;
    v.host.reset();
    --placed_;
    clear_if_vacant(h);
}

void PoolState::erase_vm(VmId vm_id) {
    auto it = vms_.find(vm_id);
    if (it == vms_.end()) throw UnknownVm("unknown VM " + std::to_string(vm_id.value));
    if (it->second.host) throw InvalidArgument("cannot erase a placed VM");
    vms_.erase(it);
}

void PoolState::migrate(VmId vm_id, HostId target_id) {
    VmRecord& v = vm(vm_id);
    if (!v.host) throw UnknownVm("VM " + std::to_string(vm_id.value) + " is not placed");
    HostRecord& src = host(*v.host);
    HostRecord& dst = host(target_id);
    if (src.id == dst.id) throw InvalidArgument("migration source equals target");
    if (!fits(v.shape, dst)) throw CapacityExceeded("migration target lacks capacity");
    src.vms.erase(vm_id);
    src.residual_vms.erase(vm_id);
    src.outbound.emplace(vm_id, v.shape);
    clear_if_vacant(src);
    dst.used += v.shape;
    dst.vms.insert(vm_id);
    if (dst.lava_state == HostState::Empty) dst.lava_state = HostState::Open;
    v.is_residual = false;
    v.host = target_id;
}

void PoolState::release_outbound(HostId host_id, VmId vm_id) {
    HostRecord& h = host(host_id);
    auto it = h.outbound.find(vm_id);
    if (it == h.outbound.end()) throw UnknownVm("no outbound reservation for VM");
    h.used -= it->second;
    h.outbound.erase(it);
}

std::size_t PoolState::empty_host_count() const {
    std::size_t n = 0;
    for (const auto& h : hosts_) n += h.empty() ? 1 : 0;
    return n;
}

void PoolState::check_invariants() const {
    ResourceVec total_used;
    ResourceVec total_expected;
    std::size_t placed = 0;
    for (const auto& h : hosts_) {
        ResourceVec sum;
        for (VmId id : h.vms) {
            const VmRecord& v = vm(id);
            if (!v.host || *v.host != h.id) throw Error("VM/host back-reference mismatch");
            sum += v.shape;
        }
        for (const auto& [id, shape] : h.outbound) sum += shape;
        if (sum != h.used) throw Error("host " + std::to_string(h.id.value) + " used != sum of shapes");
        if (!h.used.non_negative() || !fits_within(h.used, h.capacity)) {
            throw Error("host " + std::to_string(h.id.value) + " over capacity");
        }
        if ((h.lava_state == HostState::Empty) != h.vms.empty()) {
            throw Error("host " + std::to_string(h.id.value) + " empty state mismatch");
        }
        for (VmId id : h.residual_vms) {
            if (!h.vms.contains(id)) throw Error("residual VM not resident");
        }
        total_used += h.used;
        total_expected += sum;
        placed += h.vms.size();
    }
    for (const auto& [id, v] : vms_) {
        if (v.host && !host(*v.host).vms.contains(id)) throw Error("VM references host that lacks it");
    }
    if (placed != placed_) throw Error("placed VM count drift");
    if (total_used != total_expected) throw Error("pool conservation violated");
}

}  // namespace lava

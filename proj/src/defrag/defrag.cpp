#include "lava/defrag/defrag.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace lava {

std::string_view to_string(MigrationOrder o) { return o == MigrationOrder::Lars ? "lars" : "trace"; }

MigrationOrder parse_migration_order(std::string_view s) {
    if (s == "trace") return MigrationOrder::TraceOrder;
    if (s == "lars") return MigrationOrder::Lars;
    throw InvalidArgument("unknown migration ordering '" + std::string(s) + "'");
}

MigrationSlots::MigrationSlots(std::size_t max_concurrent) : max_(max_concurrent) {
    if (max_ == 0) throw InvalidArgument("max_concurrent must be positive");
}

void MigrationSlots::acquire() {
    if (!available()) throw Error("migration slot limit exceeded");
    ++active_;
}

void MigrationSlots::release() {
    if (active_ == 0) throw Error("releasing an idle migration slot");
    --active_;
}

void DefragConfig::validate() const {
    if (!(empty_host_trigger >= 0.0 && empty_host_trigger <= 1.0)) {
        throw InvalidArgument("empty_host_trigger must be in [0, 1]");
    }
    if (candidates_per_round == 0) throw InvalidArgument("candidates_per_round must be positive");
    if (max_concurrent == 0) throw InvalidArgument("max_concurrent must be positive");
    if (migration_duration_s <= 0) throw InvalidArgument("migration_duration_s must be positive");
    if (check_interval_s <= 0) throw InvalidArgument("check_interval_s must be positive");
}

std::vector<HostId> select_candidates(PoolState& pool, const DefragConfig& cfg) {
    std::vector<const HostRecord*> ranked;
    for (const HostRecord& h : pool.hosts()) {
        if (!h.vms.empty() && !h.unavailable_for_scheduling) ranked.push_back(&h);
    }
    auto free_frac = [](const HostRecord& h) {
        const ResourceVec f = h.free();
        // Compare free fractions without rounding: a/b > c/d  <=>  a*d > c*b.
        return std::pair<__int128, __int128>{static_cast<__int128>(f.cpu_milli) * h.capacity.mem_mib +
                                                 static_cast<__int128>(f.mem_mib) * h.capacity.cpu_milli,
                                             static_cast<__int128>(h.capacity.cpu_milli) * h.capacity.mem_mib};
    };
    std::sort(ranked.begin(), ranked.end(), [&](const HostRecord* a, const HostRecord* b) {
        if (a->vms.size() != b->vms.size()) return a->vms.size() < b->vms.size();
        const auto [na, da] = free_frac(*a);
        const auto [nb, db] = free_frac(*b);
        const __int128 lhs = na * db;
        const __int128 rhs = nb * da;
        if (lhs != rhs) return lhs > rhs;
        return a->id < b->id;
    });
    std::vector<HostId> out;
    for (std::size_t i = 0; i < ranked.size() && i < cfg.candidates_per_round; ++i) out.push_back(ranked[i]->id);
    for (HostId id : out) pool.host(id).unavailable_for_scheduling = true;
    return out;
}

std::vector<VmId> lars_order(const HostRecord& host, const PoolState& pool, const LifetimeModel& model, SimTime now) {
    std::vector<std::pair<double, VmId>> keyed;
    for (VmId id : host.vms) {
        const VmRecord& vm = pool.vm(id);
        keyed.emplace_back(model.predict_remaining(vm, vm.uptime(now)), id);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<VmId> out;
    for (const auto& [_, id] : keyed) out.push_back(id);
    return out;
}

std::vector<VmId> trace_order(const HostRecord& host, const PoolState& pool) {
    std::vector<VmId> out(host.vms.begin(), host.vms.end());
    std::sort(out.begin(), out.end(), [&](VmId a, VmId b) {
        const SimTime ta = pool.vm(a).create_time;
        const SimTime tb = pool.vm(b).create_time;
        return ta != tb ? ta < tb : a < b;
    });
    return out;
}

std::vector<VmId> order_instance(const EvacuationInstance& inst, MigrationOrder order) {
    std::vector<const EvacuationVm*> vms;
    for (const EvacuationVm& v : inst.vms) vms.push_back(&v);
    if (order == MigrationOrder::Lars) {
        std::sort(vms.begin(), vms.end(), [](const EvacuationVm* a, const EvacuationVm* b) {
            return a->predicted_remaining_s != b->predicted_remaining_s
                       ? a->predicted_remaining_s > b->predicted_remaining_s
                       : a->id < b->id;
        });
    } else {
        std::sort(vms.begin(), vms.end(), [](const EvacuationVm* a, const EvacuationVm* b) {
            return a->create_time != b->create_time ? a->create_time < b->create_time : a->id < b->id;
        });
    }
    std::vector<VmId> out;
    for (const EvacuationVm* v : vms) out.push_back(v->id);
    return out;
}

EvacuationResult replay_evacuation(const EvacuationInstance& inst, const std::vector<VmId>& order,
                                   std::size_t max_concurrent, SimTime duration_s) {
    if (max_concurrent == 0) throw InvalidArgument("max_concurrent must be positive");
    std::unordered_map<VmId, const EvacuationVm*> by_id;
    for (const EvacuationVm& v : inst.vms) by_id.emplace(v.id, &v);
    if (order.size() != inst.vms.size()) throw InvalidArgument("order must list every VM of the instance once");

    std::priority_queue<SimTime, std::vector<SimTime>, std::greater<>> slot_free;
    for (std::size_t i = 0; i < max_concurrent; ++i) slot_free.push(inst.start);

    EvacuationResult r;
    r.finish = inst.start;
    for (VmId id : order) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw InvalidArgument("order names a VM outside the instance");
        const EvacuationVm& v = *it->second;
        by_id.erase(it);
        MigrationTask task;
        task.vm = v.id;
        task.source = inst.host;
        task.enqueue_time = inst.start;
        const SimTime t = slot_free.top();
        if (v.exit_time <= t) {
            task.cancelled = true;
            ++r.cancelled;
            r.finish = std::max(r.finish, v.exit_time);
        } else {
            slot_free.pop();
            slot_free.push(t + duration_s);
            task.start_time = t;
            task.end_time = t + duration_s;
            ++r.migrations;
            r.finish = std::max(r.finish, t + duration_s);
        }
        r.tasks.push_back(task);
    }
    return r;
}

EvacuationResult replay_evacuation(const EvacuationInstance& inst, MigrationOrder order, std::size_t max_concurrent,
                                   SimTime duration_s) {
    return replay_evacuation(inst, order_instance(inst, order), max_concurrent, duration_s);
}

std::size_t OrderingReport::migrations() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.migrations;
    return n;
}

std::size_t OrderingReport::cancelled() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.cancelled;
    return n;
}

OrderingReport replay_all(const std::vector<EvacuationInstance>& instances, MigrationOrder order,
                          std::size_t max_concurrent, SimTime duration_s) {
    OrderingReport rep;
    rep.ordering = order;
    rep.instances = instances;
    for (const auto& inst : instances) rep.results.push_back(replay_evacuation(inst, order, max_concurrent, duration_s));
    return rep;
}

MigrationReduction migration_reduction(std::size_t baseline, std::size_t lars) {
    MigrationReduction m{baseline, lars, 0.0};
    if (baseline > 0) m.reduction = 1.0 - static_cast<double>(lars) / static_cast<double>(baseline);
    return m;
}

MigrationReduction count_saved_migrations(const OrderingReport& baseline, const OrderingReport& lars) {
    auto same_vm = [](const EvacuationVm& a, const EvacuationVm& b) {
        return std::tie(a.id, a.create_time, a.exit_time) == std::tie(b.id, b.create_time, b.exit_time);
    };
    if (baseline.instances.size() != lars.instances.size()) throw MismatchedRuns("instance counts differ");
    for (std::size_t i = 0; i < baseline.instances.size(); ++i) {
        const auto& a = baseline.instances[i];
        const auto& b = lars.instances[i];
        if (a.host != b.host || a.start != b.start || a.vms.size() != b.vms.size() ||
            !std::equal(a.vms.begin(), a.vms.end(), b.vms.begin(), same_vm)) {
            throw MismatchedRuns("instance " + std::to_string(i) + " differs between runs");
        }
    }
    return migration_reduction(baseline.migrations(), lars.migrations());
}

void write_defrag_log(const std::vector<MigrationTask>& tasks, std::ostream& os) {
    os << "# vm\tsource\ttarget\tenqueue_s\tstart_s\tend_s\tcancelled\n";
    for (const MigrationTask& t : tasks) {
        os << t.vm << '\t' << t.source << '\t';
        if (t.target) {
            os << *t.target;
        } else {
            os << '-';
        }
        os << '\t' << t.enqueue_time << '\t';
        if (t.start_time) {
            os << *t.start_time;
        } else {
            os << '-';
        }
        os << '\t';
        if (t.end_time) {
            os << *t.end_time;
        } else {
            os << '-';
        }
        os << '\t' << (t.cancelled ? 1 : 0) << '\n';
    }
}

}  // namespace lava

#include "lava/sim/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <set>
#include <unordered_map>

namespace lava {

void SimConfig::validate() const {
    if (hosts == 0) throw InvalidArgument("hosts must be positive");
    if (host_capacity.cpu_milli <= 0 || host_capacity.mem_mib <= 0) throw InvalidArgument("host capacity must be positive");
    if (warm_up_s < 0) throw InvalidArgument("warm_up_s must be >= 0");
    if (sample_interval_s <= 0) throw InvalidArgument("sample_interval_s must be positive");
    if (cache_refresh_s < 0) throw InvalidArgument("cache_refresh_s must be >= 0");
    if (stranding_interval_s < 0) throw InvalidArgument("stranding_interval_s must be >= 0");
    sched.nilas.validate();
    sched.lava.validate();
    defrag.validate();
}

namespace {

double mean_of(const std::vector<MetricSample>& s, double (*f)(const MetricSample&)) {
    if (s.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& x : s) sum += f(x);
    return sum / static_cast<double>(s.size());
}

struct EventAfter {
    bool operator()(const SimEvent& x, const SimEvent& y) const {
        if (y < x) return true;
        if (x < y) return false;
        return x.b > y.b;
    }
};

class Engine {
public:
    Engine(const Trace& trace, const LifetimeModel& model, const SimConfig& cfg)
        : trace_(trace),
          model_(model),
          cfg_(cfg),
          pool_(PoolState::homogeneous(cfg.hosts, cfg.host_capacity)),
          cache_(cfg.cache_refresh_s),
          sched_(make_scheduler(cfg.algorithm, cfg.sched)),
          slots_(cfg.defrag.max_concurrent) {}

    MetricSeries run();

private:
    SchedContext ctx() { return SchedContext{pool_, model_, cache_, pool_.now}; }
    void push(SimEvent e) { events_.push(e); }
    std::uint64_t next_key() { return counter_++; }

    void warm_up();
    void arrive(std::size_t index);
    void exit_vm(VmId id);
    void deadline(HostId host, std::uint64_t generation);
    void sample();
    void defrag_check();
    void start_migrations();
    void end_migration(VmId vm, HostId source);

    void place(VmRecord& vm, HostId host, const char* phase, const Scheduler& decider);
    void sync_deadline(HostRecord& host, std::uint64_t generation_before);
    void release_candidate_if_vacant(HostId host);
    void requeue_deferred();
    void log_placement(const VmRecord& vm, std::optional<HostId> host, const char* phase, const Scheduler& decider);

    const Trace& trace_;
    const LifetimeModel& model_;
    const SimConfig& cfg_;
    PoolState pool_;
    PredictionCache cache_;
    std::unique_ptr<Scheduler> sched_;
    BestFitScheduler warm_sched_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventAfter> events_;
    std::uint64_t counter_ = 0;
    std::unordered_map<VmId, std::size_t> trace_index_;
    MetricSeries out_;
    SimTime end_ = 0;

    MigrationSlots slots_;
    std::deque<VmId> queue_;
    std::vector<VmId> deferred_;
    std::unordered_map<VmId, std::size_t> pending_;
    std::set<HostId> candidates_;
};

void Engine::log_placement(const VmRecord& vm, std::optional<HostId> host, const char* phase,
                           const Scheduler& decider) {
    if (!cfg_.record_placements) return;
    out_.placements.push_back({pool_.now, vm.id, host, phase, std::string(decider.name())});
}

void Engine::sync_deadline(HostRecord& host, std::uint64_t generation_before) {
    if (host.deadline_generation == generation_before || !host.deadline) return;
    push({*host.deadline, EventKind::HostDeadline, host.id.value, host.id.value, host.deadline_generation});
}

void Engine::place(VmRecord& vm, HostId host_id, const char* phase, const Scheduler& decider) {
    HostRecord& host = pool_.host(host_id);
    const std::uint64_t gen = host.deadline_generation;
    pool_.place(vm.id, host_id);
    cache_.invalidate(host_id);
    SchedContext c = ctx();
    sched_->after_place(host, vm, c);
    sync_deadline(host, gen);
    log_placement(vm, host_id, phase, decider);
    push({vm.true_exit_time, EventKind::VmExit, trace_index_.at(vm.id), vm.id.value, 0});
}

void Engine::warm_up() {
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const TraceRecord& r = trace_[i];
        if (r.create_time >= 0) break;
        if (r.exit_time() <= 0) continue;
        VmRecord& vm = pool_.add_vm(r.to_vm());
        ++out_.vms_seen;
        SchedContext c = ctx();
        sched_->on_arrival(vm, c);
        const std::optional<HostId> h = warm_sched_.select(vm, c);
        if (!h) {
            ++out_.scheduling_failures;
            log_placement(vm, std::nullopt, "warmup", warm_sched_);
            pool_.erase_vm(vm.id);
            continue;
        }
        place(vm, *h, "warmup", warm_sched_);
    }
}

void Engine::arrive(std::size_t index) {
    VmRecord& vm = pool_.add_vm(trace_[index].to_vm());
    ++out_.vms_seen;
    SchedContext c = ctx();
    sched_->on_arrival(vm, c);
    const std::optional<HostId> h = sched_->select(vm, c);
    if (!h) {
        ++out_.scheduling_failures;
        log_placement(vm, std::nullopt, "arrival", *sched_);
        pool_.erase_vm(vm.id);
        return;
    }
    place(vm, *h, "arrival", *sched_);
}

void Engine::exit_vm(VmId id) {
    if (!pool_.has_vm(id)) return;
    if (auto it = pending_.find(id); it != pending_.end()) {
        out_.migration_log[it->second].cancelled = true;
        ++out_.migrations_cancelled;
        pending_.erase(it);
    }
    const HostId host_id = *pool_.vm(id).host;
    HostRecord& host = pool_.host(host_id);
    const std::uint64_t gen = host.deadline_generation;
    pool_.remove(id);
    cache_.invalidate(host_id);
    SchedContext c = ctx();
    sched_->after_remove(host, c);
    sync_deadline(host, gen);
    pool_.erase_vm(id);
    release_candidate_if_vacant(host_id);
}

void Engine::deadline(HostId host_id, std::uint64_t generation) {
    HostRecord& host = pool_.host(host_id);
    if (host.deadline_generation != generation || host.vms.empty()) return;
    SchedContext c = ctx();
    sched_->on_deadline(host, c);
    ++out_.deadline_promotions;
    sync_deadline(host, generation);
}

void Engine::sample() {
    MetricSample s;
    s.time = pool_.now;
    s.m = metrics_snapshot(pool_);
    s.optimal_empty_pct = 100.0 * optimal_empty_bound(pool_);
    s.num_vms = pool_.placed_vm_count();
    ResourceVec used;
    ResourceVec cap;
    for (const HostRecord& h : pool_.hosts()) {
        used += h.used;
        cap += h.capacity;
    }
    s.util_cpu = static_cast<double>(used.cpu_milli) / static_cast<double>(cap.cpu_milli);
    s.util_mem = static_cast<double>(used.mem_mib) / static_cast<double>(cap.mem_mib);
    out_.samples.push_back(s);

    if (cfg_.stranding_interval_s > 0 && (pool_.now - out_.measure_start) % cfg_.stranding_interval_s == 0) {
        std::vector<ResourceVec> mix;
        mix.reserve(trace_.size());
        for (const TraceRecord& r : trace_) mix.push_back(r.shape);
        out_.stranding.push_back(
            {pool_.now, inflation_stranding(pool_, mix, cfg_.stranding_seed ^ static_cast<std::uint64_t>(pool_.now))});
    }
}

void Engine::requeue_deferred() {
    for (VmId id : deferred_) queue_.push_back(id);
    deferred_.clear();
}

void Engine::release_candidate_if_vacant(HostId host_id) {
    auto it = candidates_.find(host_id);
    if (it == candidates_.end()) return;
    HostRecord& host = pool_.host(host_id);
    if (!host.empty()) return;
    host.unavailable_for_scheduling = false;
    candidates_.erase(it);
}

void Engine::defrag_check() {
    requeue_deferred();
    if (candidates_.empty() && metrics_snapshot(pool_).empty_hosts_pct < 100.0 * cfg_.defrag.empty_host_trigger) {
        const std::vector<HostId> chosen = select_candidates(pool_, cfg_.defrag);
        for (HostId hid : chosen) {
            const HostRecord& host = pool_.host(hid);
            candidates_.insert(hid);
            EvacuationInstance inst{hid, pool_.now, {}};
            const std::vector<VmId> order = cfg_.defrag.ordering == MigrationOrder::Lars
                                                ? lars_order(host, pool_, model_, pool_.now)
                                                : trace_order(host, pool_);
            for (VmId id : order) {
                const VmRecord& vm = pool_.vm(id);
                if (cfg_.defrag.approve && !cfg_.defrag.approve(vm)) continue;
                inst.vms.push_back({id, vm.create_time, vm.true_exit_time, model_.predict_remaining(vm, vm.uptime(pool_.now))});
                MigrationTask task;
                task.vm = id;
                task.source = hid;
                task.enqueue_time = pool_.now;
                pending_[id] = out_.migration_log.size();
                out_.migration_log.push_back(task);
                queue_.push_back(id);
            }
            out_.evacuations.push_back(std::move(inst));
        }
    }
    push({pool_.now, EventKind::MigrationStart, next_key(), 0, 0});
}

void Engine::start_migrations() {
    while (slots_.available() && !queue_.empty()) {
        const VmId id = queue_.front();
        queue_.pop_front();
        auto it = pending_.find(id);
        if (it == pending_.end()) continue;
        VmRecord& vm = pool_.vm(id);
        SchedContext c = ctx();
        sched_->on_reschedule(vm, c);
        const std::optional<HostId> target = sched_->select(vm, c);
        if (!target) {
            ++out_.migration_target_failures;
            deferred_.push_back(id);
            continue;
        }
        const HostId source = *vm.host;
        HostRecord& src = pool_.host(source);
        HostRecord& dst = pool_.host(*target);
        const std::uint64_t src_gen = src.deadline_generation;
        const std::uint64_t dst_gen = dst.deadline_generation;
        pool_.migrate(id, *target);
        cache_.invalidate(source);
        cache_.invalidate(*target);
        sched_->after_remove(src, c);
        sched_->after_place(dst, vm, c);
        sync_deadline(src, src_gen);
        sync_deadline(dst, dst_gen);
        slots_.acquire();
        MigrationTask& task = out_.migration_log[it->second];
        task.target = *target;
        task.start_time = pool_.now;
        task.end_time = pool_.now + cfg_.defrag.migration_duration_s;
        pending_.erase(it);
        ++out_.migrations;
        log_placement(vm, *target, "migration", *sched_);
        push({*task.end_time, EventKind::MigrationEnd, next_key(), id.value, source.value});
    }
}

void Engine::end_migration(VmId vm, HostId source) {
    pool_.release_outbound(source, vm);
    slots_.release();
    cache_.invalidate(source);
    release_candidate_if_vacant(source);
    requeue_deferred();
    push({pool_.now, EventKind::MigrationStart, next_key(), 0, 0});
}

MetricSeries Engine::run() {
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        if (i > 0) {
            const TraceRecord& p = trace_[i - 1];
            const TraceRecord& q = trace_[i];
            if (q.create_time < p.create_time || (q.create_time == p.create_time && q.id <= p.id)) {
                throw TraceNotSorted("trace not sorted by (create_time, vm_id) at index " + std::to_string(i));
            }
        }
        trace_index_.emplace(trace_[i].id, i);
    }

    out_.measure_start = cfg_.warm_up ? cfg_.warm_up_s : 0;
    end_ = out_.measure_start;
    for (const TraceRecord& r : trace_) end_ = std::max(end_, r.create_time);
    out_.measure_end = end_;

    pool_.now = 0;
    if (cfg_.warm_up) warm_up();
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        if (trace_[i].create_time >= 0) push({trace_[i].create_time, EventKind::VmArrival, i, i, 0});
    }
    push({out_.measure_start, EventKind::MetricSample, next_key(), 0, 0});
    if (cfg_.cache_refresh_s > 0) push({cfg_.cache_refresh_s, EventKind::CacheRefresh, next_key(), 0, 0});
    if (cfg_.defrag.enabled) push({cfg_.defrag.check_interval_s, EventKind::DefragCheck, next_key(), 0, 0});

    while (!events_.empty()) {
        const SimEvent e = events_.top();
        if (e.time > end_) break;
        events_.pop();
        pool_.now = e.time;
        switch (e.kind) {
            case EventKind::VmArrival: arrive(static_cast<std::size_t>(e.a)); break;
            case EventKind::VmExit: exit_vm(VmId{e.a}); break;
            case EventKind::HostDeadline: deadline(HostId{e.a}, e.b); break;
            case EventKind::CacheRefresh:
                cache_.expire(e.time);
                push({e.time + cfg_.cache_refresh_s, EventKind::CacheRefresh, next_key(), 0, 0});
                break;
            case EventKind::MetricSample:
                sample();
                push({e.time + cfg_.sample_interval_s, EventKind::MetricSample, next_key(), 0, 0});
                break;
            case EventKind::DefragCheck:
                defrag_check();
                push({e.time + cfg_.defrag.check_interval_s, EventKind::DefragCheck, next_key(), 0, 0});
                break;
            case EventKind::MigrationStart: start_migrations(); break;
            case EventKind::MigrationEnd: end_migration(VmId{e.a}, HostId{e.b}); break;
        }
        if (cfg_.check_invariants) {
            pool_.check_invariants();
            if (slots_.active() > slots_.max_concurrent()) throw Error("migration slot bound exceeded");
            ++out_.invariant_checks;
        }
    }
    return std::move(out_);
}

}  // namespace

double MetricSeries::mean_empty_hosts_pct() const {
    return mean_of(samples, [](const MetricSample& s) { return s.m.empty_hosts_pct; });
}
double MetricSeries::mean_empty_to_free() const {
    return mean_of(samples, [](const MetricSample& s) { return s.m.empty_to_free_ratio; });
}
double MetricSeries::mean_packing_density() const {
    return mean_of(samples, [](const MetricSample& s) { return s.m.packing_density; });
}
double MetricSeries::mean_optimal_empty_pct() const {
    return mean_of(samples, [](const MetricSample& s) { return s.optimal_empty_pct; });
}

MetricSeries run_simulation(const Trace& trace, const LifetimeModel& model, const SimConfig& cfg) {
    cfg.validate();
    Engine engine(trace, model, cfg);
    return engine.run();
}

}  // namespace lava

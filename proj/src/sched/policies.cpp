#include "lava/sched/policies.hpp"

#include <algorithm>
#include <cmath>

namespace lava {

// --- NILAS -----------------------------------------------------------------

void NilasConfig::validate() const {
    if (bucket_boundaries_s.empty() || bucket_boundaries_s.front() != 0) {
        throw InvalidArgument("NILAS bucket boundaries must start at 0");
    }
    for (std::size_t i = 1; i < bucket_boundaries_s.size(); ++i) {
        if (bucket_boundaries_s[i] <= bucket_boundaries_s[i - 1]) {
            throw InvalidArgument("NILAS bucket boundaries must be strictly increasing");
        }
    }
}

int quantize_temporal_cost(double delta_t_s, const NilasConfig& cfg) {
    const auto& b = cfg.bucket_boundaries_s;
    auto it = std::upper_bound(b.begin(), b.end(), delta_t_s,
                               [](double v, SimTime boundary) { return v < static_cast<double>(boundary); });
    const auto idx = static_cast<int>(it - b.begin()) - 1;
    return std::max(idx, 0);
}

int temporal_cost(double vm_exit, double host_exit, const NilasConfig& cfg) {
    return quantize_temporal_cost(std::max(vm_exit - host_exit, 0.0), cfg);
}

NilasScheduler::NilasScheduler(NilasConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

ScoreVector score_nilas(const HostRecord& host, const VmRecord& vm, SchedContext& ctx, const NilasConfig& cfg) {
    const double horizon = host.vms.empty() ? static_cast<double>(ctx.now)
                                            : host_exit_time(host, ctx.pool, ctx.model, ctx.now, ctx.cache);
    return {host.empty() ? 1 : 0, temporal_cost(vm.predicted_exit_time, horizon, cfg),
            best_fit_residual(host, vm.shape)};
}

ScoreVector NilasScheduler::score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const {
    const ScoreVector n = score_nilas(host, vm, ctx, cfg_);
    ScoreVector s;
    if (cfg_.position == NilasPosition::Highest) {
        s.push(n.parts[0]).push(n.parts[1]);
        push_business(s, host, vm);
        s.push(n.parts[2]);
    } else {
        push_business(s, host, vm);
        s.parts.insert(s.parts.end(), n.parts.begin(), n.parts.end());
    }
    return s;
}

// --- Best fit --------------------------------------------------------------

ScoreVector BestFitScheduler::score(const HostRecord& host, const VmRecord& vm, SchedContext&) const {
    ScoreVector s;
    push_business(s, host, vm);
    const ScoreVector bf = score_best_fit(host, vm.shape);
    s.parts.insert(s.parts.end(), bf.parts.begin(), bf.parts.end());
    return s;
}

// --- LA-Binary -------------------------------------------------------------

BinaryClass LaBinaryScheduler::vm_class(const VmRecord& vm, SimTime now) const {
    return classify_binary(vm.initial_predicted_exit - static_cast<double>(now), threshold_s_);
}

BinaryClass LaBinaryScheduler::host_class(const HostRecord& host, const PoolState& pool, SimTime now) const {
    double latest = -1e300;
    for (VmId id : host.vms) latest = std::max(latest, pool.vm(id).initial_predicted_exit);
    return classify_binary(std::max(latest - static_cast<double>(now), 0.0), threshold_s_);
}

ScoreVector LaBinaryScheduler::score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const {
    int tier = 2;
    if (!host.vms.empty()) tier = host_class(host, ctx.pool, ctx.now) == vm_class(vm, ctx.now) ? 0 : 1;
    ScoreVector s;
    push_business(s, host, vm);
    s.push(tier).push(best_fit_residual(host, vm.shape));
    return s;
}

// --- LAVA ------------------------------------------------------------------

void LavaConfig::validate() const {
    if (!(recycle_threshold > 0.0 && recycle_threshold < 1.0)) {
        throw InvalidArgument("recycle_threshold must be in (0, 1)");
    }
    if (!(deadline_factor >= 1.0)) throw InvalidArgument("deadline_factor must be >= 1");
    nilas.validate();
}

LavaScheduler::LavaScheduler(LavaConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

void LavaScheduler::on_arrival(VmRecord& vm, SchedContext& ctx) const {
    Scheduler::on_arrival(vm, ctx);
    vm.lifetime_class = lifetime_class(vm.predicted_exit_time - static_cast<double>(ctx.now));
}

void LavaScheduler::on_reschedule(VmRecord& vm, SchedContext& ctx) const {
    Scheduler::on_reschedule(vm, ctx);
    vm.lifetime_class = lifetime_class(vm.predicted_exit_time - static_cast<double>(ctx.now));
}

int LavaScheduler::tier(const HostRecord& host, LifetimeClass vm_class) {
    if (host.vms.empty() || !host.host_class) return 3;
    if (host.lava_state == HostState::Recycling && *host.host_class > vm_class) return 0;
    if (host.lava_state == HostState::Open && *host.host_class == vm_class) return 1;
    return 2;
}

ScoreVector LavaScheduler::score(const HostRecord& host, const VmRecord& vm, SchedContext& ctx) const {
    const int t = tier(host, vm.lifetime_class);
    const int distance = t == 0 ? to_int(*host.host_class) - to_int(vm.lifetime_class) : 0;
    ScoreVector s;
    push_business(s, host, vm);
    s.push(t).push(distance);
    const ScoreVector n = score_nilas(host, vm, ctx, cfg_.nilas);
    s.parts.insert(s.parts.end(), n.parts.begin(), n.parts.end());
    return s;
}

namespace {

void arm_deadline(HostRecord& host, SimTime now, const LavaConfig& cfg) {
    const double span = cfg.deadline_factor * static_cast<double>(class_upper_bound_s(*host.host_class));
    host.deadline = now + static_cast<SimTime>(std::llround(span));
    ++host.deadline_generation;
}

void set_residuals(HostRecord& host, PoolState& pool, std::set<VmId> residuals) {
    for (VmId id : host.residual_vms) pool.vm(id).is_residual = false;
    host.residual_vms = std::move(residuals);
    for (VmId id : host.residual_vms) pool.vm(id).is_residual = true;
}

bool over_threshold(const HostRecord& host, double threshold) {
    auto frac = [](std::int64_t used, std::int64_t cap) {
        return cap > 0 ? static_cast<double>(used) / static_cast<double>(cap) : 0.0;
    };
    return frac(host.used.cpu_milli, host.capacity.cpu_milli) > threshold ||
           frac(host.used.mem_mib, host.capacity.mem_mib) > threshold;
}

}  // namespace

void lava_after_place(HostRecord& host, VmRecord& vm, PoolState& pool, SimTime now, const LavaConfig& cfg) {
    const LifetimeClass c = vm.lifetime_class;
    if (!host.host_class) {
        host.host_class = c;
        host.lava_state = HostState::Open;
        arm_deadline(host, now, cfg);
    } else if (c > *host.host_class) {
        // A longer-lived VM landed through the catch-all tier; it now defines the host class.
        host.host_class = c;
        arm_deadline(host, now, cfg);
        if (host.lava_state == HostState::Recycling) set_residuals(host, pool, {vm.id});
    } else if (c == *host.host_class && host.lava_state == HostState::Recycling) {
        host.residual_vms.insert(vm.id);
        vm.is_residual = true;
    }
    if (host.lava_state == HostState::Open && over_threshold(host, cfg.recycle_threshold)) {
        host.lava_state = HostState::Recycling;
        set_residuals(host, pool, host.vms);
    }
}

void lava_on_exit(HostRecord& host, PoolState& pool, SimTime now, const LavaConfig& cfg) {
    if (host.vms.empty()) return;  // PoolState::remove already reset the host
    if (host.lava_state != HostState::Recycling || !host.residual_vms.empty()) return;
    host.host_class = class_from_int(to_int(*host.host_class) - 1);
    set_residuals(host, pool, host.vms);
    arm_deadline(host, now, cfg);
}

void lava_on_deadline(HostRecord& host, PoolState& pool, SimTime now, const LavaConfig& cfg) {
    if (host.vms.empty() || !host.host_class) return;
    host.host_class = class_from_int(to_int(*host.host_class) + 1);
    set_residuals(host, pool, host.vms);
    arm_deadline(host, now, cfg);
}

void LavaScheduler::after_place(HostRecord& host, VmRecord& vm, SchedContext& ctx) const {
    lava_after_place(host, vm, ctx.pool, ctx.now, cfg_);
}

void LavaScheduler::after_remove(HostRecord& host, SchedContext& ctx) const {
    lava_on_exit(host, ctx.pool, ctx.now, cfg_);
}

void LavaScheduler::on_deadline(HostRecord& host, SchedContext& ctx) const {
    lava_on_deadline(host, ctx.pool, ctx.now, cfg_);
}

std::unique_ptr<Scheduler> make_scheduler(Algorithm algo, const SchedulerOptions& opts) {
    switch (algo) {
        case Algorithm::BestFit: return std::make_unique<BestFitScheduler>();
        case Algorithm::LaBinary: return std::make_unique<LaBinaryScheduler>(opts.la_binary_threshold_s);
        case Algorithm::Nilas: return std::make_unique<NilasScheduler>(opts.nilas);
        case Algorithm::Lava: return std::make_unique<LavaScheduler>(opts.lava);
    }
    throw InvalidArgument("unknown algorithm");
}

}  // namespace lava

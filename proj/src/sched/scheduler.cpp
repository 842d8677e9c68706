#include "lava/sched/scheduler.hpp"

#include <algorithm>

namespace lava {

namespace {

std::int64_t scaled_fraction(std::int64_t num, std::int64_t den) {
    if (den <= 0) return 0;
    const __int128 scaled = static_cast<__int128>(num) * kFitScale / den;
    return static_cast<std::int64_t>(scaled);
}

}  // namespace

std::int64_t best_fit_residual(const HostRecord& host, const ResourceVec& vm_shape) {
    const ResourceVec after = host.capacity - host.used - vm_shape;
    return std::max(scaled_fraction(after.cpu_milli, host.capacity.cpu_milli),
                    scaled_fraction(after.mem_mib, host.capacity.mem_mib));
}

ScoreVector score_best_fit(const HostRecord& host, const ResourceVec& vm_shape) {
    return {host.empty() ? 1 : 0, best_fit_residual(host, vm_shape)};
}

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::BestFit: return "baseline";
        case Algorithm::LaBinary: return "la-binary";
        case Algorithm::Nilas: return "nilas";
        case Algorithm::Lava: return "lava";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "baseline" || name == "best-fit" || name == "bestfit") return Algorithm::BestFit;
    if (name == "la-binary" || name == "la") return Algorithm::LaBinary;
    if (name == "nilas") return Algorithm::Nilas;
    if (name == "lava") return Algorithm::Lava;
    throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

void Scheduler::on_arrival(VmRecord& vm, SchedContext& ctx) const {
    const double initial = ctx.model.predict_remaining(vm, 0.0);
    vm.initial_predicted_exit = static_cast<double>(vm.create_time) + initial;
    vm.predicted_exit_time = static_cast<double>(ctx.now) + ctx.model.predict_remaining(vm, vm.uptime(ctx.now));
}

void Scheduler::on_reschedule(VmRecord& vm, SchedContext& ctx) const {
    vm.predicted_exit_time = static_cast<double>(ctx.now) + ctx.model.predict_remaining(vm, vm.uptime(ctx.now));
}

std::optional<HostId> Scheduler::select(const VmRecord& vm, SchedContext& ctx) const {
    std::optional<HostId> best;
    ScoreVector best_score;
    for (const HostRecord& host : ctx.pool.hosts()) {
        if (!fits(vm.shape, host)) continue;
        ScoreVector s = score(host, vm, ctx);
        if (!best || s < best_score) {
            best = host.id;
            best_score = std::move(s);
        }
    }
    return best;
}

}  // namespace lava

#include "lava/predict/cache.hpp"

#include <algorithm>
#include <iterator>

namespace lava {

bool PredictionCache::servable(const Entry& e, SimTime now) const {
    return now - e.refreshed_at < refresh_interval_ && e.exit_time > static_cast<double>(now);
}

std::optional<double> PredictionCache::lookup(HostId host, SimTime now) const {
    auto it = entries_.find(host);
    if (it == entries_.end() || !servable(it->second, now)) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second.exit_time;
}

void PredictionCache::store(HostId host, double exit_time, SimTime now) {
    if (refresh_interval_ <= 0) return;
    entries_[host] = Entry{exit_time, now};
}

void PredictionCache::expire(SimTime now) {
    std::erase_if(entries_, [&](const auto& kv) { return !servable(kv.second, now); });
}

double compute_host_exit_time(const HostRecord& host, const PoolState& pool, const LifetimeModel& model,
                              SimTime now) {
    if (host.vms.empty()) throw EmptyHost("host " + std::to_string(host.id.value) + " has no VMs");
    double latest = static_cast<double>(now);
    for (VmId id : host.vms) {
        const VmRecord& vm = pool.vm(id);
        latest = std::max(latest, static_cast<double>(now) + model.predict_remaining(vm, vm.uptime(now)));
    }
    return latest;
}

double host_exit_time(const HostRecord& host, const PoolState& pool, const LifetimeModel& model, SimTime now,
                      PredictionCache& cache) {
    if (host.vms.empty()) throw EmptyHost("host " + std::to_string(host.id.value) + " has no VMs");
    if (auto cached = cache.lookup(host.id, now)) return *cached;
    const double exit = compute_host_exit_time(host, pool, model, now);
    cache.store(host.id, exit, now);
    return exit;
}

}  // namespace lava

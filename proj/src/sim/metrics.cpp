#include "lava/sim/metrics.hpp"

#include <algorithm>
#include <random>

#include "lava/sched/score.hpp"

namespace lava {

MetricsSnapshot metrics_snapshot(const PoolState& pool) {
    MetricsSnapshot m;
    const auto& hosts = pool.hosts();
    if (hosts.empty()) return m;
    std::size_t empty = 0;
    std::int64_t empty_cpu = 0;
    std::int64_t free_cpu = 0;
    std::int64_t busy_used = 0;
    std::int64_t busy_cap = 0;
    for (const HostRecord& h : hosts) {
        free_cpu += h.capacity.cpu_milli - h.used.cpu_milli;
        if (h.empty()) {
            ++empty;
            empty_cpu += h.capacity.cpu_milli;
        } else {
            busy_used += h.used.cpu_milli;
            busy_cap += h.capacity.cpu_milli;
        }
    }
    m.empty_hosts_pct = 100.0 * static_cast<double>(empty) / static_cast<double>(hosts.size());
    m.empty_to_free_ratio = free_cpu > 0 ? static_cast<double>(empty_cpu) / static_cast<double>(free_cpu) : 0.0;
    m.packing_density = busy_cap > 0 ? static_cast<double>(busy_used) / static_cast<double>(busy_cap) : 1.0;
    return m;
}

double optimal_empty_bound(const PoolState& pool) {
    const auto& hosts = pool.hosts();
    if (hosts.empty()) return 0.0;
    const ResourceVec cap = hosts.front().capacity;
    ResourceVec free;
    for (const HostRecord& h : hosts) {
        if (h.capacity != cap) throw HeterogeneousPool("optimal_empty_bound requires identical host capacities");
        free += h.capacity - h.used;
    }
    const std::int64_t by_cpu = free.cpu_milli / cap.cpu_milli;
    const std::int64_t by_mem = free.mem_mib / cap.mem_mib;
    return static_cast<double>(std::min(by_cpu, by_mem)) / static_cast<double>(hosts.size());
}

namespace {

/// Best-fit host for the shape among `hosts`, or -1.
std::ptrdiff_t best_fit_index(const std::vector<HostRecord>& hosts, const ResourceVec& shape) {
    std::ptrdiff_t best = -1;
    ScoreVector best_score;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (!fits(shape, hosts[i])) continue;
        ScoreVector s = score_best_fit(hosts[i], shape);
        if (best < 0 || s < best_score) {
            best = static_cast<std::ptrdiff_t>(i);
            best_score = std::move(s);
        }
    }
    return best;
}

void inflate(HostRecord& h, const ResourceVec& shape) {
    h.used += shape;
    // A placeholder entry keeps empty() false; the id is never looked up.
    h.vms.insert(VmId{~std::uint64_t{0} - h.vms.size()});
}

}  // namespace

StrandingResult inflation_stranding(const PoolState& pool, const std::vector<ResourceVec>& mix, std::uint64_t seed,
                                    std::size_t max_consecutive_failures) {
    StrandingResult r;
    std::vector<HostRecord> hosts = pool.hosts();
    if (!mix.empty()) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, mix.size() - 1);
        std::size_t failures = 0;
        while (failures < max_consecutive_failures) {
            const ResourceVec& shape = mix[pick(rng)];
            const std::ptrdiff_t i = best_fit_index(hosts, shape);
            if (i < 0) {
                ++failures;
                continue;
            }
            failures = 0;
            inflate(hosts[static_cast<std::size_t>(i)], shape);
            ++r.inflated_vms;
        }
        const ResourceVec smallest = *std::min_element(mix.begin(), mix.end(), [](const auto& a, const auto& b) {
            return a.cpu_milli != b.cpu_milli ? a.cpu_milli < b.cpu_milli : a.mem_mib < b.mem_mib;
        });
        for (std::ptrdiff_t i = best_fit_index(hosts, smallest); i >= 0; i = best_fit_index(hosts, smallest)) {
            inflate(hosts[static_cast<std::size_t>(i)], smallest);
            ++r.inflated_vms;
        }
    }
    ResourceVec total;
    ResourceVec free;
    for (const HostRecord& h : hosts) {
        total += h.capacity;
        free += h.capacity - h.used;
    }
    if (total.cpu_milli > 0) r.stranded_cpu_frac = static_cast<double>(free.cpu_milli) / static_cast<double>(total.cpu_milli);
    if (total.mem_mib > 0) r.stranded_mem_frac = static_cast<double>(free.mem_mib) / static_cast<double>(total.mem_mib);
    return r;
}

}  // namespace lava

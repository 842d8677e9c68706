#pragma once

#include <cstdint>
#include <vector>

#include "lava/core/pool.hpp"

namespace lava {

struct MetricsSnapshot {
    /// Percent of hosts with no resident VM and no migration reservation.
    double empty_hosts_pct = 0.0;
    /// CPU on empty hosts / free CPU on all hosts; 0 when nothing is free.
    double empty_to_free_ratio = 0.0;
    /// Allocated CPU on non-empty hosts / capacity of non-empty hosts; 1 when all are empty.
    double packing_density = 1.0;
};

MetricsSnapshot metrics_snapshot(const PoolState& pool);

class HeterogeneousPool : public Error {
public:
    using Error::Error;
};

/// Largest empty-host fraction any repacking of the current allocation could
/// reach: min over dimensions of floor(total free / host capacity), over |hosts|.
double optimal_empty_bound(const PoolState& pool);

struct StrandingResult {
    double stranded_cpu_frac = 0.0;
    double stranded_mem_frac = 0.0;
    std::size_t inflated_vms = 0;
};

/// Fills a copy of the pool with shapes drawn from `mix` by best fit until
/// `max_consecutive_failures` draws in a row fit nowhere, then places the
/// smallest shape until it fits nowhere. Free capacity left over is stranded.
StrandingResult inflation_stranding(const PoolState& pool, const std::vector<ResourceVec>& mix, std::uint64_t seed,
                                    std::size_t max_consecutive_failures = 200);

}  // namespace lava

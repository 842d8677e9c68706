#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "lava/core/pool.hpp"
#include "lava/predict/model.hpp"

namespace lava {

class EmptyHost : public Error {
public:
    using Error::Error;
};

/// Host-level cache of repredicted exit times. An entry is served only while
/// it is younger than the refresh interval and its exit time lies in the
/// future; placements and exits on a host invalidate it immediately.
class PredictionCache {
public:
    explicit PredictionCache(SimTime refresh_interval_s = 60) : refresh_interval_(refresh_interval_s) {}

    std::optional<double> lookup(HostId host, SimTime now) const;
    void store(HostId host, double exit_time, SimTime now);
    void invalidate(HostId host) { entries_.erase(host); }
    void clear() { entries_.clear(); }
    /// Drops entries that can no longer be served at `now`.
    void expire(SimTime now);

    SimTime refresh_interval() const { return refresh_interval_; }
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    struct Entry {
        double exit_time;
        SimTime refreshed_at;
    };
    bool servable(const Entry& e, SimTime now) const;

    SimTime refresh_interval_;
    std::unordered_map<HostId, Entry> entries_;
    mutable std::uint64_t hits_ = 0;
    mutable std::uint64_t misses_ = 0;
};

/// Maximum over resident VMs of their repredicted exit time; an entry from
/// the last refresh is reused while the cache allows it.
double host_exit_time(const HostRecord& host, const PoolState& pool, const LifetimeModel& model, SimTime now,
                      PredictionCache& cache);

/// Uncached version of host_exit_time.
double compute_host_exit_time(const HostRecord& host, const PoolState& pool, const LifetimeModel& model,
                              SimTime now);

}  // namespace lava

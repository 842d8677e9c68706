#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lava/sim/engine.hpp"

namespace lava {

inline constexpr const char* kSeriesMagic = "# lava-series v1";
inline constexpr const char* kSeriesHeader =
    "time_s,empty_hosts_pct,empty_to_free_ratio,packing_density,num_vms,util_cpu,util_mem,optimal_empty_pct";

/// Versioned CSV; every value is printed with fixed precision so identical
/// runs produce identical bytes.
void write_series_csv(const MetricSeries& series, std::ostream& os);

/// Time-averaged metrics and run counters.
nlohmann::json summarize(const MetricSeries& series);

/// Tab-separated placement log: time, vm, host ('-' on failure), phase, scheduler.
void write_placement_log(const MetricSeries& series, std::ostream& os);

/// Fixed-precision decimal rendering used by every CSV writer.
std::string fixed(double v, int digits = 6);

}  // namespace lava

#include "lava/sim/report.hpp"

#include <cstdio>
#include <ostream>

namespace lava {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_series_csv(const MetricSeries& series, std::ostream& os) {
    os << kSeriesMagic << '\n' << kSeriesHeader << '\n';
    for (const MetricSample& s : series.samples) {
        os << s.time << ',' << fixed(s.m.empty_hosts_pct) << ',' << fixed(s.m.empty_to_free_ratio) << ','
           << fixed(s.m.packing_density) << ',' << s.num_vms << ',' << fixed(s.util_cpu) << ',' << fixed(s.util_mem)
           << ',' << fixed(s.optimal_empty_pct) << '\n';
    }
}

nlohmann::json summarize(const MetricSeries& series) {
    nlohmann::json j;
    j["samples"] = series.samples.size();
    j["measure_start_s"] = series.measure_start;
    j["measure_end_s"] = series.measure_end;
    j["mean_empty_hosts_pct"] = series.mean_empty_hosts_pct();
    j["mean_empty_to_free_ratio"] = series.mean_empty_to_free();
    j["mean_packing_density"] = series.mean_packing_density();
    j["mean_optimal_empty_pct"] = series.mean_optimal_empty_pct();
    j["vms_seen"] = series.vms_seen;
    j["scheduling_failures"] = series.scheduling_failures;
    j["migrations"] = series.migrations;
    j["migrations_cancelled"] = series.migrations_cancelled;
    j["migration_target_failures"] = series.migration_target_failures;
    j["deadline_promotions"] = series.deadline_promotions;
    if (!series.stranding.empty()) {
        double cpu = 0.0;
        double mem = 0.0;
        for (const auto& s : series.stranding) {
            cpu += s.r.stranded_cpu_frac;
            mem += s.r.stranded_mem_frac;
        }
        const double n = static_cast<double>(series.stranding.size());
        j["mean_stranded_cpu_frac"] = cpu / n;
        j["mean_stranded_mem_frac"] = mem / n;
        j["stranding_snapshots"] = series.stranding.size();
    }
    return j;
}

void write_placement_log(const MetricSeries& series, std::ostream& os) {
    os << "# time_s\tvm\thost\tphase\tscheduler\n";
    for (const PlacementEntry& p : series.placements) {
        os << p.time << '\t' << p.vm << '\t';
        if (p.host) {
            os << *p.host;
        } else {
            os << '-';
        }
        os << '\t' << p.phase << '\t' << p.scheduler << '\n';
    }
}

}  // namespace lava

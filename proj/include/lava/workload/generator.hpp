#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lava/workload/trace.hpp"

namespace lava {

/// One log-normal component; parameters are in log10 hours.
struct LognormalComponent {
    double weight = 1.0;
    double mu_log10_h = 0.0;
    double sigma_log10_h = 0.5;
};

struct ShapeWeight {
    ResourceVec shape;
    double weight = 1.0;
};

/// A population of VMs with its own lifetime mixture, shape mix and the
/// feature values that identify it to a lifetime model.
struct StratumSpec {
    std::string name;
    double weight = 1.0;
    std::vector<LognormalComponent> lifetime;
    std::vector<ShapeWeight> shapes;
    std::string vm_family;
    std::string vm_category;
    std::string priority;
    bool has_ssd = false;
    bool spot = false;
};

struct GeneratorConfig {
    std::size_t num_vms = 20000;
    std::size_t hosts = 50;
    ResourceVec host_capacity = ResourceVec::cores_gib(96, 384);
    /// Long-run CPU utilization the arrival rate is tuned for. Ignored when
    /// arrival_rate_per_h > 0.
    double target_util = 0.5;
    double arrival_rate_per_h = 0.0;
    /// Emits VMs that are already running at t = 0 (negative create times),
    /// drawn from the same process started `prefill_window_s` earlier.
    bool prefill = true;
    SimTime prefill_window_s = 30 * kDay;
    SimTime min_lifetime_s = 60;
    SimTime max_lifetime_s = 30 * kDay;
    std::vector<std::string> zones = {"zone-a", "zone-b", "zone-c"};
    std::vector<StratumSpec> strata;
    std::uint64_t seed = 1;

    void validate() const;
    /// Arrivals per hour implied by target_util (or the fixed rate).
    double arrival_rate() const;
    /// Expected cpu-core-hours consumed per VM, before lifetime clamping.
    double expected_core_hours_per_vm() const;
};

/// Skewed mixture: most VMs are short, most core-hours go to long VMs.
GeneratorConfig default_generator_config();

/// Two strata whose lifetimes are bimodal within each stratum, for studies
/// of the value of uptime in prediction.
GeneratorConfig bimodal_generator_config();

/// Deterministic given cfg.seed. Ids are assigned in creation order.
Trace generate(const GeneratorConfig& cfg);

}  // namespace lava

#pragma once

#include <cstdint>
#include <vector>

#include "lava/core/types.hpp"

namespace lava {

/// Two-lifetime model: unit-size jobs, hosts holding at most k jobs each.
/// Time is in abstract units; lambda is the arrival rate per nominal host.
struct TheoremConfig {
    std::size_t m = 20;
    std::size_t k = 10;
    double S = 1.0;
    double L = 50.0;
    double lambda = 1.0;
    double rho = 0.1;
    double epsilon = 0.05;
    /// Total simulated time; the first warmup_frac of it is not measured.
    double horizon = 200.0;
    double warmup_frac = 0.25;
    std::uint64_t seed = 1;

    void validate() const;
};

struct TheoremRun {
    std::size_t peak_hosts = 0;
    double mean_hosts = 0.0;
    std::size_t jobs = 0;
    std::size_t mispredicted_long = 0;
};

struct TheoremResult {
    TheoremRun no_learning;
    TheoremRun learning;
    /// no_learning.peak_hosts - learning.peak_hosts.
    double gap() const;
};

/// Both policies see the same arrival stream and labels. Arrivals occur at
/// rate m * lambda. Jobs go to the fullest host carrying their predicted
/// label, else to a new host. With learning, a host turns L as soon as one
/// of its jobs has run longer than S.
TheoremResult two_class_experiment(const TheoremConfig& cfg);
TheoremRun two_class_policy(const TheoremConfig& cfg, bool learning);

/// 1 - (1 - epsilon)^(rho * lambda * x).
double misprediction_probability(double epsilon, double rho, double lambda, double x);

/// Frequency over `trials` windows in which at least one of
/// round(rho * lambda * x) long jobs was mislabeled.
double misprediction_probability_mc(double epsilon, double rho, double lambda, double x, std::size_t trials,
                                    std::uint64_t seed);

struct GapPoint {
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double gap = 0.0;
    TheoremResult result;
};

/// Runs two_class_experiment for every (m, seed) pair; cfg.m and cfg.seed
/// are overridden.
std::vector<GapPoint> gap_sweep(const TheoremConfig& cfg, const std::vector<std::size_t>& ms, std::size_t seeds);

}  // namespace lava

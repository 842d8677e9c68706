#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "lava/cli/config.hpp"
#include "lava/defrag/defrag.hpp"
#include "lava/sim/accuracy.hpp"
#include "lava/sim/engine.hpp"
#include "lava/sim/stats.hpp"
#include "lava/sim/theorem.hpp"

namespace lava {

// --- compare -----------------------------------------------------------------

struct CompareRow {
    Algorithm algorithm = Algorithm::BestFit;
    double empty_hosts_pct = 0.0;
    double empty_to_free_ratio = 0.0;
    double packing_density = 0.0;
    double optimal_empty_pct = 0.0;
    /// Percentage-point delta of empty_hosts_pct against the first row.
    double delta_pp = 0.0;
    std::size_t scheduling_failures = 0;
    std::size_t deadline_promotions = 0;
};

/// Runs every algorithm on the same trace and model; the first algorithm is
/// the reference for delta_pp. Needs at least two algorithms.
std::vector<CompareRow> compare_algorithms(const Trace& trace, const LifetimeModel& model, const SimConfig& cfg,
                                           const std::vector<Algorithm>& algorithms);

inline constexpr const char* kCompareMagic = "# lava-compare v1";
void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& os);

// --- accuracy sweep ------------------------------------------------------------

struct SweepRow {
    Algorithm algorithm = Algorithm::Nilas;
    double accuracy = 1.0;
    std::uint64_t seed = 0;
    double baseline_empty_pct = 0.0;
    double empty_pct = 0.0;
    /// empty_pct - baseline_empty_pct, both under the same noisy predictor.
    double improvement_pp = 0.0;
};

/// One Best Fit run and one run per algorithm for every (accuracy, seed);
/// the seed drives the noise draw. Runs fan out over `jobs` threads and the
/// rows come back sorted by (algorithm, accuracy, seed).
std::vector<SweepRow> sweep_accuracy(const Trace& trace, const SimConfig& cfg, const SweepConfig& sweep,
                                     const NoisyOracleConfig& noise, std::size_t jobs = 1);

struct SweepSummary {
    Algorithm algorithm = Algorithm::Nilas;
    /// Spearman correlation of (accuracy, improvement) over all rows.
    double spearman = 0.0;
    std::vector<double> accuracies;
    std::vector<double> mean_improvement_pp;
};

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows);

inline constexpr const char* kSweepMagic = "# lava-sweep v1";
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);

// --- defragmentation -----------------------------------------------------------

struct DefragComparison {
    /// Every evacuation observed in the integrated trace-order run, replayed
    /// offline under both orderings.
    OrderingReport trace_order;
    OrderingReport lars;
    MigrationReduction reduction;
    /// Instances where LARS migrated more VMs than trace order.
    std::size_t lars_worse_instances = 0;
    /// Migrations performed by full integrated runs of each ordering.
    std::size_t integrated_trace_migrations = 0;
    std::size_t integrated_lars_migrations = 0;
    std::size_t integrated_trace_cancelled = 0;
    std::size_t integrated_lars_cancelled = 0;
};

/// cfg.defrag.enabled is forced on; cfg.defrag.ordering is overridden per run.
DefragComparison defrag_compare(const Trace& trace, const LifetimeModel& model, SimConfig cfg);

nlohmann::json to_json(const DefragComparison& d);

// --- theorem -------------------------------------------------------------------

struct TheoremReport {
    double epsilon = 0.0;
    std::vector<GapPoint> points;
    Regression slope;
    /// Same sweep with epsilon = 0.
    std::vector<GapPoint> control;
    MeanTest control_gap;
};

TheoremReport theorem_report(const TheoremSweepConfig& cfg);

inline constexpr const char* kTheoremMagic = "# lava-theorem v1";
void write_theorem_csv(const TheoremReport& r, std::ostream& os);
nlohmann::json to_json(const TheoremReport& r);

// --- model training and evaluation ---------------------------------------------

std::vector<TrainingRow> training_rows(const Trace& trace);

struct ModelReport {
    BinaryScores at_threshold;
    LogErrorHistogram log_error;
    std::array<BinaryScores, kUptimeQuantiles> quantiles{};
    /// VM ids present in both training and test traces.
    std::size_t overlap = 0;
};

/// `train` may be empty when the overlap check is not wanted.
ModelReport evaluate_model(const LifetimeModel& model, const Trace& test, const Trace& train);

nlohmann::json to_json(const ModelReport& r);

}  // namespace lava

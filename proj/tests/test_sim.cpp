#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lava/predict/empirical.hpp"
#include "lava/sim/accuracy.hpp"
#include "lava/sim/engine.hpp"
#include "lava/sim/metrics.hpp"
#include "lava/sim/report.hpp"
#include "lava/sim/stats.hpp"
#include "lava/sim/theorem.hpp"
#include "lava/workload/generator.hpp"
#include "support.hpp"

namespace lava {
namespace {

using test::kHost;
using test::record;
using test::vm;

// --- metrics ----------------------------------------------------------------------

/// Pool of `n` hosts where host i carries `used[i]` cores (and 1 GiB per core).
PoolState pool_with(std::size_t n, const std::vector<std::int64_t>& used) {
    PoolState pool = PoolState::homogeneous(n, kHost);
    std::uint64_t id = 1;
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i] == 0) continue;
        pool.add_vm(vm(id, ResourceVec::cores_gib(used[i], used[i]), 0, 100));
        pool.place(VmId{id++}, HostId{i});
    }
    return pool;
}

TEST(Metrics, DefinitionsExample) {
    // 10 hosts, 4 empty; the 6 busy hosts use 480 of 576 cores.
    const PoolState pool = pool_with(10, {80, 80, 80, 80, 80, 80, 0, 0, 0, 0});
    const MetricsSnapshot m = metrics_snapshot(pool);
    EXPECT_DOUBLE_EQ(m.empty_hosts_pct, 40.0);
    EXPECT_DOUBLE_EQ(m.empty_to_free_ratio, 384.0 / (384.0 + 96.0));
    EXPECT_NEAR(m.packing_density, 480.0 / 576.0, 1e-12);
}

TEST(Metrics, AllEmptyConventions) {
    const MetricsSnapshot m = metrics_snapshot(PoolState::homogeneous(5, kHost));
    EXPECT_DOUBLE_EQ(m.empty_hosts_pct, 100.0);
    EXPECT_DOUBLE_EQ(m.empty_to_free_ratio, 1.0);
    EXPECT_DOUBLE_EQ(m.packing_density, 1.0);
}

TEST(Metrics, AllFullConventions) {
    const PoolState pool = pool_with(3, {96, 96, 96});
    const MetricsSnapshot m = metrics_snapshot(pool);
    EXPECT_DOUBLE_EQ(m.empty_hosts_pct, 0.0);
    EXPECT_DOUBLE_EQ(m.empty_to_free_ratio, 0.0);
    EXPECT_DOUBLE_EQ(m.packing_density, 1.0);
}

TEST(OptimalBound, Examples) {
    PoolState pool = PoolState::homogeneous(10, kHost);
    EXPECT_DOUBLE_EQ(optimal_empty_bound(pool), 1.0);
    // 3.2 hosts' worth of CPU spread over four hosts; memory is not binding.
    for (std::uint64_t i = 0; i < 4; ++i) {
        pool.add_vm(vm(i + 1, ResourceVec{76800, 1024}, 0, 100));
        pool.place(VmId{i + 1}, HostId{i});
    }
    EXPECT_DOUBLE_EQ(optimal_empty_bound(pool), 0.6);
    const PoolState full = pool_with(3, {96, 96, 96});
    EXPECT_DOUBLE_EQ(optimal_empty_bound(full), 0.0);
}

TEST(OptimalBound, MemoryCanBind) {
    PoolState pool = PoolState::homogeneous(4, kHost);
    pool.add_vm(vm(1, ResourceVec::cores_gib(1, 200), 0, 100));
    pool.add_vm(vm(2, ResourceVec::cores_gib(1, 200), 0, 100));
    pool.place(VmId{1}, HostId{0});
    pool.place(VmId{2}, HostId{1});
    // 400 GiB used > one host's 384 GiB: at most 2 of 4 hosts can be empty.
    EXPECT_DOUBLE_EQ(optimal_empty_bound(pool), 0.5);
}

TEST(OptimalBound, HeterogeneousThrows) {
    PoolState pool = PoolState::homogeneous(2, kHost);
    pool.add_host(ResourceVec::cores_gib(48, 192));
    EXPECT_THROW(optimal_empty_bound(pool), HeterogeneousPool);
}

// Same VM multiset, different layouts: the three metrics move together.
TEST(MetricsProperty, CoMovementOnEqualMultisets) {
    std::mt19937_64 rng(12);
    const std::vector<ResourceVec> shapes = {ResourceVec::cores_gib(8, 32), ResourceVec::cores_gib(24, 96)};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ResourceVec> vms;
        for (int i = 0; i < 10; ++i) vms.push_back(shapes[rng() % 2]);
        MetricsSnapshot snaps[2];
        for (auto& snap : snaps) {
            PoolState pool = PoolState::homogeneous(8, kHost);
            std::uint64_t id = 1;
            for (const auto& s : vms) {
                pool.add_vm(vm(id, s, 0, 100));
                std::vector<HostId> ok;
                for (const auto& h : pool.hosts()) {
                    if (fits(s, h)) ok.push_back(h.id);
                }
                pool.place(VmId{id++}, ok[rng() % ok.size()]);
            }
            snap = metrics_snapshot(pool);
        }
        const auto sign = [](double d) { return (d > 1e-12) - (d < -1e-12); };
        const int e = sign(snaps[0].empty_hosts_pct - snaps[1].empty_hosts_pct);
        ASSERT_EQ(e, sign(snaps[0].empty_to_free_ratio - snaps[1].empty_to_free_ratio));
        ASSERT_EQ(e, sign(snaps[0].packing_density - snaps[1].packing_density));
    }
}

// --- stranding --------------------------------------------------------------------

TEST(Stranding, CpuLeftWithoutMemory) {
    PoolState pool = PoolState::homogeneous(1, kHost);
    pool.add_vm(vm(1, ResourceVec::cores_gib(92, 384), 0, 100));
    pool.place(VmId{1}, HostId{0});
    const auto r = inflation_stranding(pool, {ResourceVec::cores_gib(1, 1)}, 1);
    EXPECT_DOUBLE_EQ(r.stranded_cpu_frac, 4.0 / 96.0);
    EXPECT_DOUBLE_EQ(r.stranded_mem_frac, 0.0);
    EXPECT_EQ(r.inflated_vms, 0u);
}

TEST(Stranding, EmptyPoolHostSizedMix) {
    const PoolState pool = PoolState::homogeneous(4, kHost);
    const auto r = inflation_stranding(pool, {kHost}, 1);
    EXPECT_DOUBLE_EQ(r.stranded_cpu_frac, 0.0);
    EXPECT_DOUBLE_EQ(r.stranded_mem_frac, 0.0);
    EXPECT_EQ(r.inflated_vms, 4u);
}

TEST(Stranding, FragmentedStrandsMore) {
    const std::vector<ResourceVec> mix = {ResourceVec::cores_gib(48, 192)};
    // 96 cores in use either way: packed onto one host or spread 24 per host.
    const PoolState packed = pool_with(4, {96, 0, 0, 0});
    const PoolState spread = pool_with(4, {24, 24, 24, 24});
    const auto a = inflation_stranding(packed, mix, 3);
    const auto b = inflation_stranding(spread, mix, 3);
    EXPECT_DOUBLE_EQ(a.stranded_cpu_frac, 0.0);
    EXPECT_DOUBLE_EQ(b.stranded_cpu_frac, 0.25);
    EXPECT_GT(b.stranded_cpu_frac, a.stranded_cpu_frac);
}

TEST(Stranding, SourcePoolUntouched) {
    const PoolState pool = pool_with(2, {10, 0});
    inflation_stranding(pool, {ResourceVec::cores_gib(2, 2)}, 1);
    EXPECT_EQ(pool.host(HostId{1}).used, ResourceVec{});
    EXPECT_EQ(pool.empty_host_count(), 1u);
}

// --- engine -----------------------------------------------------------------------

TEST(Engine, EmptyTraceAllEmpty) {
    OracleModel oracle;
    SimConfig cfg;
    cfg.hosts = 5;
    const MetricSeries s = run_simulation({}, oracle, cfg);
    ASSERT_FALSE(s.samples.empty());
    for (const auto& x : s.samples) EXPECT_DOUBLE_EQ(x.m.empty_hosts_pct, 100.0);
}

TEST(Engine, UnsortedTraceThrows) {
    OracleModel oracle;
    const Trace t = {record(2, 100, 50, kHost), record(1, 10, 50, kHost)};
    EXPECT_THROW(run_simulation(t, oracle, SimConfig{}), TraceNotSorted);
    const Trace dup = {record(1, 10, 50, kHost), record(1, 10, 60, kHost)};
    EXPECT_THROW(run_simulation(dup, oracle, SimConfig{}), TraceNotSorted);
}

TEST(Engine, WarmUpWithoutLiveVmsStartsAfterTwoDays) {
    OracleModel oracle;
    const Trace t = {record(1, 100, 3 * kDay, ResourceVec::cores_gib(4, 16)),
                     record(2, 3 * kDay, 100, ResourceVec::cores_gib(4, 16))};
    SimConfig cfg;
    cfg.hosts = 4;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    EXPECT_EQ(s.measure_start, 2 * kDay);
    ASSERT_FALSE(s.samples.empty());
    EXPECT_EQ(s.samples.front().time, 2 * kDay);
    EXPECT_EQ(s.samples.front().num_vms, 1u);
}

TEST(Engine, ColdStartDropsLiveVms) {
    OracleModel oracle;
    const Trace t = {record(1, -500, 10 * kDay, ResourceVec::cores_gib(4, 16)),
                     record(2, 100, 100, ResourceVec::cores_gib(4, 16))};
    SimConfig cfg;
    cfg.hosts = 4;
    cfg.warm_up = false;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    EXPECT_EQ(s.measure_start, 0);
    ASSERT_FALSE(s.samples.empty());
    EXPECT_EQ(s.samples.front().time, 0);
    EXPECT_EQ(s.samples.front().num_vms, 0u);
    EXPECT_EQ(s.vms_seen, 1u);
}

TEST(Engine, WarmUpUsesBaselineScheduler) {
    OracleModel oracle;
    Trace t(test::default_trace(5).begin(), test::default_trace(5).begin() + 3000);
    SimConfig cfg;
    cfg.algorithm = Algorithm::Lava;
    cfg.record_placements = true;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    std::size_t warm = 0;
    std::size_t measured = 0;
    for (const auto& p : s.placements) {
        if (p.phase == "warmup") {
            ++warm;
            EXPECT_EQ(p.scheduler, "baseline");
            EXPECT_EQ(p.time, 0);
        } else {
            ++measured;
            EXPECT_EQ(p.scheduler, "lava");
        }
    }
    EXPECT_GT(warm, 0u);
    EXPECT_GT(measured, 0u);
}

TEST(Engine, SampleCadence) {
    OracleModel oracle;
    Trace t(test::default_trace(6).begin(), test::default_trace(6).begin() + 2000);
    SimConfig cfg;
    cfg.sample_interval_s = 600;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    ASSERT_GT(s.samples.size(), 2u);
    for (std::size_t i = 1; i < s.samples.size(); ++i) EXPECT_EQ(s.samples[i].time - s.samples[i - 1].time, 600);
    EXPECT_LE(s.samples.back().time, s.measure_end);
}

TEST(Engine, ExitBeforeArrivalAtSameInstant) {
    // Host fits one VM; the second arrives exactly when the first exits.
    OracleModel oracle;
    const Trace t = {record(1, 0, 100, kHost), record(2, 100, 100, kHost)};
    SimConfig cfg;
    cfg.hosts = 1;
    cfg.warm_up = false;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    EXPECT_EQ(s.scheduling_failures, 0u);
}

TEST(Engine, SaturationCountsFailures) {
    OracleModel oracle;
    const Trace t = {record(1, 0, 1000, kHost), record(2, 10, 100, kHost)};
    SimConfig cfg;
    cfg.hosts = 1;
    cfg.warm_up = false;
    EXPECT_EQ(run_simulation(t, oracle, cfg).scheduling_failures, 1u);
}

TEST(Engine, DeterministicSeries) {
    OracleModel oracle;
    Trace t(test::default_trace(7).begin(), test::default_trace(7).begin() + 3000);
    for (Algorithm a : {Algorithm::BestFit, Algorithm::Nilas, Algorithm::Lava}) {
        SimConfig cfg;
        cfg.algorithm = a;
        std::ostringstream x, y;
        write_series_csv(run_simulation(t, oracle, cfg), x);
        write_series_csv(run_simulation(t, oracle, cfg), y);
        EXPECT_EQ(x.str(), y.str()) << to_string(a);
    }
}

// Shuffling the serialized lines leaves the replay unchanged: the canonical
// order comes from (create_time, id), not from input order.
TEST(Engine, InputOrderIrrelevant) {
    Trace t;
    std::uint64_t id = 1;
    for (SimTime c = 0; c < 20 * kHour; c += kHour) {
        for (int j = 0; j < 15; ++j) {
            t.push_back(record(id, c, 600 + static_cast<SimTime>((id * 7919) % 40000),
                               ResourceVec::cores_gib(2 + static_cast<std::int64_t>(id % 5) * 2, 8)));
            ++id;
        }
    }
    std::ostringstream os;
    serialize_trace(t, os);
    std::vector<std::string> lines;
    std::istringstream is(os.str());
    std::string magic;
    std::string header;
    std::getline(is, magic);
    std::getline(is, header);
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    std::mt19937_64 rng(2);
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled = magic + "\n" + header + "\n";
    for (const auto& l : lines) shuffled += l + "\n";
    std::istringstream in(shuffled);
    const Trace t2 = parse_trace(in);

    OracleModel oracle;
    SimConfig cfg;
    cfg.hosts = 6;
    cfg.warm_up = false;
    cfg.algorithm = Algorithm::Lava;
    std::ostringstream a, b;
    write_series_csv(run_simulation(t, oracle, cfg), a);
    write_series_csv(run_simulation(t2, oracle, cfg), b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Engine, InvariantsHoldEveryEvent) {
    OracleModel oracle;
    Trace t(test::default_trace(8).begin(), test::default_trace(8).begin() + 3000);
    for (Algorithm a : {Algorithm::BestFit, Algorithm::LaBinary, Algorithm::Nilas, Algorithm::Lava}) {
        SimConfig cfg;
        cfg.algorithm = a;
        cfg.check_invariants = true;
        const MetricSeries s = run_simulation(t, oracle, cfg);
        EXPECT_GT(s.invariant_checks, 0u);
    }
}

TEST(Engine, StrandingSnapshots) {
    OracleModel oracle;
    Trace t(test::default_trace(9).begin(), test::default_trace(9).begin() + 2000);
    SimConfig cfg;
    cfg.stranding_interval_s = 6 * kHour;
    const MetricSeries s = run_simulation(t, oracle, cfg);
    ASSERT_FALSE(s.stranding.empty());
    for (const auto& x : s.stranding) {
        EXPECT_GE(x.r.stranded_cpu_frac, 0.0);
        EXPECT_LE(x.r.stranded_cpu_frac, 1.0);
        EXPECT_EQ((x.time - s.measure_start) % cfg.stranding_interval_s, 0);
    }
    EXPECT_TRUE(summarize(s).contains("mean_stranded_cpu_frac"));
}

TEST(Engine, LavaAtLeastBaselineOnSkewedTrace) {
    OracleModel oracle;
    SimConfig cfg;
    cfg.algorithm = Algorithm::BestFit;
    const double base = run_simulation(test::default_trace(1), oracle, cfg).mean_empty_hosts_pct();
    cfg.algorithm = Algorithm::Lava;
    const double lava = run_simulation(test::default_trace(1), oracle, cfg).mean_empty_hosts_pct();
    EXPECT_GE(lava, base);
}

TEST(Engine, ConfigValidation) {
    SimConfig cfg;
    cfg.hosts = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = SimConfig{};
    cfg.sample_interval_s = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

// --- report -----------------------------------------------------------------------

TEST(Report, SeriesCsvHeaderAndPrecision) {
    MetricSeries s;
    MetricSample x;
    x.time = 300;
    x.m.empty_hosts_pct = 12.5;
    x.m.empty_to_free_ratio = 1.0 / 3.0;
    x.num_vms = 7;
    s.samples.push_back(x);
    std::ostringstream os;
    write_series_csv(s, os);
    EXPECT_EQ(os.str(), std::string(kSeriesMagic) + "\n" + kSeriesHeader +
                            "\n300,12.500000,0.333333,1.000000,7,0.000000,0.000000,0.000000\n");
    EXPECT_EQ(fixed(2.0 / 3.0, 3), "0.667");
}

TEST(Report, SummaryFields) {
    MetricSeries s;
    MetricSample x;
    x.m.empty_hosts_pct = 10.0;
    s.samples = {x, x};
    s.samples[1].m.empty_hosts_pct = 30.0;
    s.migrations = 4;
    const auto j = summarize(s);
    EXPECT_DOUBLE_EQ(j["mean_empty_hosts_pct"].get<double>(), 20.0);
    EXPECT_EQ(j["migrations"].get<int>(), 4);
    EXPECT_FALSE(j.contains("mean_stranded_cpu_frac"));
}

// --- uptime-quantile accuracy -----------------------------------------------------

TEST(UptimeAccuracy, OracleIsPerfect) {
    OracleModel oracle;
    Trace t;
    for (std::uint64_t i = 1; i <= 200; ++i) t.push_back(record(i, 0, static_cast<SimTime>(i) * 5 * kHour, kHost));
    for (const auto& q : uptime_quantile_accuracy(oracle, t)) EXPECT_DOUBLE_EQ(q.f1(), 1.0);
}

TEST(UptimeAccuracy, SingleModeIsFlat) {
    std::vector<TrainingRow> rows;
    Trace t;
    for (std::uint64_t i = 1; i <= 50; ++i) {
        const TraceRecord r = record(i, 0, 3 * kHour, ResourceVec::cores_gib(4, 16));
        rows.push_back({r.features, r.lifetime_s});
        t.push_back(r);
    }
    const EmpiricalModel m = EmpiricalModel::train(rows);
    const auto q = uptime_quantile_accuracy(m, t);
    for (const auto& s : q) EXPECT_DOUBLE_EQ(s.f1(), q[0].f1());
}

TEST(UptimeAccuracy, BinaryScores) {
    BinaryScores s;
    s.add(true, true);
    s.add(true, false);
    s.add(false, true);
    s.add(false, false);
    EXPECT_DOUBLE_EQ(s.precision(), 0.5);
    EXPECT_DOUBLE_EQ(s.recall(), 0.5);
    EXPECT_DOUBLE_EQ(s.f1(), 0.5);
    EXPECT_DOUBLE_EQ(BinaryScores{}.f1(), 1.0);
}

TEST(UptimeAccuracy, LogErrorHistogramOracleZero) {
    OracleModel oracle;
    Trace t;
    for (std::uint64_t i = 1; i <= 20; ++i) t.push_back(record(i, 0, static_cast<SimTime>(i) * kHour, kHost));
    const auto h = log_error_histogram(oracle, t);
    EXPECT_DOUBLE_EQ(h.mean, 0.0);
    ASSERT_FALSE(h.counts.empty());
    EXPECT_EQ(h.counts[0], 20u);
}

// --- statistics -------------------------------------------------------------------

TEST(Stats, AverageRanksAndSpearman) {
    const std::vector<double> x = {10, 20, 20, 30};
    EXPECT_EQ(average_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> up = {2, 4, 9, 16, 100};
    const std::vector<double> down = {5, 4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(spearman(a, up), 1.0);
    EXPECT_DOUBLE_EQ(spearman(a, down), -1.0);
    EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>(5, 3.0)), 0.0);
    EXPECT_THROW(spearman(a, x), InvalidArgument);
}

TEST(Stats, RegressionAgainstHandComputation) {
    // y = 1 + 2x with residuals +-0.1; Sxx = 5, SSE = 0.04, dof = 2.
    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {3.1, 4.9, 6.9, 9.1};
    const Regression r = linear_regression(x, y);
    EXPECT_NEAR(r.slope, 2.0, 1e-12);
    EXPECT_NEAR(r.intercept, 1.0, 1e-12);
    const double se = std::sqrt(0.02 / 5.0);
    EXPECT_NEAR(r.slope_stderr, se, 1e-12);
    // Student t with 2 dof: two-sided p = 1 - t / sqrt(t^2 + 2).
    const double t = 2.0 / se;
    EXPECT_NEAR(r.p_value, 1.0 - t / std::sqrt(t * t + 2.0), 1e-9);
    EXPECT_THROW(linear_regression(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), InvalidArgument);
    EXPECT_THROW(linear_regression(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InvalidArgument);
}

TEST(Stats, OneSampleT) {
    const std::vector<double> x = {1, 2, 3};
    const MeanTest m = one_sample_t(x);
    EXPECT_DOUBLE_EQ(m.mean, 2.0);
    EXPECT_NEAR(m.standard_error, 1.0 / std::sqrt(3.0), 1e-12);
    const double t = 2.0 * std::sqrt(3.0);
    EXPECT_NEAR(m.p_value, 1.0 - t / std::sqrt(t * t + 2.0), 1e-9);
    EXPECT_DOUBLE_EQ(one_sample_t(std::vector<double>{0, 0, 0}).p_value, 1.0);
}

// --- two-class theorem experiment -------------------------------------------------

TEST(Theorem, ZeroEpsilonPoliciesIdentical) {
    TheoremConfig cfg;
    cfg.epsilon = 0.0;
    for (std::size_t m : {20, 40}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            cfg.m = m;
            cfg.seed = seed;
            const TheoremResult r = two_class_experiment(cfg);
            EXPECT_EQ(r.no_learning.peak_hosts, r.learning.peak_hosts);
            EXPECT_NEAR(r.no_learning.mean_hosts, r.learning.mean_hosts, 1e-9);
            EXPECT_EQ(r.no_learning.mispredicted_long, 0u);
        }
    }
}

TEST(Theorem, DeterministicAndConsistent) {
    TheoremConfig cfg;
    const TheoremResult a = two_class_experiment(cfg);
    const TheoremResult b = two_class_experiment(cfg);
    EXPECT_EQ(a.no_learning.peak_hosts, b.no_learning.peak_hosts);
    EXPECT_EQ(a.learning.peak_hosts, b.learning.peak_hosts);
    EXPECT_EQ(a.no_learning.jobs, a.learning.jobs);
    EXPECT_EQ(two_class_policy(cfg, true).peak_hosts, a.learning.peak_hosts);
    EXPECT_GT(a.no_learning.jobs, 0u);
}

TEST(Theorem, GapSweepCoversGrid) {
    TheoremConfig cfg;
    cfg.horizon = 60.0;
    const auto pts = gap_sweep(cfg, {10, 20}, 3);
    ASSERT_EQ(pts.size(), 6u);
    for (const auto& p : pts) EXPECT_DOUBLE_EQ(p.gap, p.result.gap());
}

TEST(Theorem, ConfigValidation) {
    TheoremConfig cfg;
    cfg.S = 60.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = TheoremConfig{};
    cfg.lambda = 0.5;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = TheoremConfig{};
    cfg.m = 0;
    EXPECT_THROW(two_class_experiment(cfg), InvalidArgument);
}

TEST(Theorem, MispredictionClosedFormMatchesMonteCarlo) {
    for (double eps : {0.01, 0.05, 0.1}) {
        for (double x : {10.0, 50.0, 200.0}) {
            const double closed = misprediction_probability(eps, 0.1, 1.0, x);
            const double mc = misprediction_probability_mc(eps, 0.1, 1.0, x, 20000, 17);
            EXPECT_NEAR(mc, closed, 0.02) << "eps " << eps << " x " << x;
        }
    }
    EXPECT_DOUBLE_EQ(misprediction_probability(0.0, 0.1, 1.0, 100.0), 0.0);
    EXPECT_NEAR(misprediction_probability(0.05, 0.1, 1.0, 100.0), 1.0 - std::pow(0.95, 10.0), 1e-12);
}

}  // namespace
}  // namespace lava

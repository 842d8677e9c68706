#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lava/cli/config.hpp"
#include "lava/cli/experiments.hpp"
#include "lava/workload/generator.hpp"
#include "support.hpp"

namespace lava {
namespace {

RunConfig from_ini(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    apply_ini(cfg, in);
    return cfg;
}

Trace small_trace(std::uint64_t seed, std::size_t n = 3000) {
    GeneratorConfig g = default_generator_config();
    g.num_vms = n;
    g.hosts = 20;
    g.seed = seed;
    return generate(g);
}

SimConfig small_sim() {
    SimConfig c;
    c.hosts = 20;
    return c;
}

TEST(ApplyIni, SetsEverySection) {
    const RunConfig c = from_ini(
        "[sim]\nhosts = 12\nhost_cpu_cores = 48\nwarm_up = false\nalgorithm = lava\n"
        "[nilas]\nbucket_boundaries_s = 0,600,3600\nposition = highest\n"
        "[lava]\nrecycle_threshold = 0.8\n"
        "[la_binary]\nthreshold_s = 3600\n"
        "[defrag]\nenabled = true\nordering = trace\nmax_concurrent = 2\n"
        "[predictor]\nspec = noisy:0.7\nseed = 5\n"
        "[empirical]\nmin_count = 3\n"
        "[sweep]\naccuracies = 0.5,1.0\nseeds = 2\nalgorithms = nilas\n"
        "[theorem]\nm = 30\nms = 10,20\n"
        "[generator]\npreset = bimodal\nnum_vms = 77\n");
    EXPECT_EQ(c.sim.hosts, 12u);
    EXPECT_EQ(c.sim.host_capacity.cpu_milli, 48000);
    EXPECT_FALSE(c.sim.warm_up);
    EXPECT_EQ(c.sim.algorithm, Algorithm::Lava);
    EXPECT_EQ(c.sim.sched.nilas.bucket_boundaries_s, (std::vector<SimTime>{0, 600, 3600}));
    EXPECT_EQ(c.sim.sched.nilas.position, NilasPosition::Highest);
    EXPECT_DOUBLE_EQ(c.sim.sched.lava.recycle_threshold, 0.8);
    EXPECT_DOUBLE_EQ(c.sim.sched.la_binary_threshold_s, 3600.0);
    EXPECT_TRUE(c.sim.defrag.enabled);
    EXPECT_EQ(c.sim.defrag.ordering, MigrationOrder::TraceOrder);
    EXPECT_EQ(c.sim.defrag.max_concurrent, 2u);
    EXPECT_EQ(c.predictor.spec, "noisy:0.7");
    EXPECT_EQ(c.predictor.noisy.seed, 5u);
    EXPECT_EQ(c.empirical.min_count, 3);
    EXPECT_EQ(c.sweep.accuracies, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(c.sweep.algorithms, std::vector<Algorithm>{Algorithm::Nilas});
    EXPECT_EQ(c.theorem.base.m, 30u);
    EXPECT_EQ(c.theorem.ms, (std::vector<std::size_t>{10, 20}));
    EXPECT_EQ(c.generator.num_vms, 77u);
    EXPECT_EQ(c.generator.strata.size(), bimodal_generator_config().strata.size());
}

TEST(ApplyIni, EmptyKeepsDefaults) {
    const RunConfig c = from_ini("");
    EXPECT_EQ(to_json(c), to_json(RunConfig{}));
}

TEST(ApplyIni, RejectsUnknownAndInvalid) {
    EXPECT_THROW(from_ini("[simulation]\nhosts = 3\n"), ConfigError);
    EXPECT_THROW(from_ini("[sim]\nhostz = 3\n"), ConfigError);
    EXPECT_THROW(from_ini("[sim]\nhosts = three\n"), ConfigError);
    EXPECT_THROW(from_ini("[sim]\nwarm_up = maybe\n"), ConfigError);
    EXPECT_THROW(from_ini("[sim]\nalgorithm = first-fit\n"), ConfigError);
    EXPECT_THROW(from_ini("[nilas]\nposition = lowest\n"), ConfigError);
    EXPECT_THROW(from_ini("[generator]\npreset = huge\n"), ConfigError);
    EXPECT_THROW(from_ini("[sweep]\naccuracies = 0.5,1.3\n"), ConfigError);
    EXPECT_THROW(from_ini("[theorem]\nS = 2\nlambda = 0.4\n"), InvalidArgument);
    EXPECT_THROW(from_ini("[sim]\nhosts = 0\n"), Error);
    EXPECT_THROW(from_ini("[sim\nhosts = 1\n"), ConfigError);
}

TEST(LoadConfig, FileAndMissingFile) {
    const std::string path = ::testing::TempDir() + "lava_cfg.ini";
    {
        std::ofstream out(path);
        out << "[sim]\nhosts = 9\n";
    }
    EXPECT_EQ(load_config(path).sim.hosts, 9u);
    EXPECT_EQ(load_config("").sim.hosts, SimConfig{}.hosts);
    std::remove(path.c_str());
    EXPECT_THROW(load_config(path), ConfigError);
}

TEST(ParseNumberList, Values) {
    EXPECT_EQ(parse_number_list("0.5,0.7, 1"), (std::vector<double>{0.5, 0.7, 1.0}));
    EXPECT_THROW(parse_number_list("0.5,x"), ConfigError);
}

TEST(NilasPosition, RoundTrip) {
    for (NilasPosition p : {NilasPosition::AboveBinPacking, NilasPosition::Highest}) {
        EXPECT_EQ(parse_nilas_position(to_string(p)), p);
    }
    EXPECT_THROW(parse_nilas_position("top"), ConfigError);
}

TEST(MakePredictor, Specs) {
    PredictorOptions o;
    EXPECT_EQ(make_predictor(o)->describe(), "oracle");
    o.spec = "noisy:0.7";
    o.noisy.seed = 3;
    const auto noisy = make_predictor(o);
    const auto* model = dynamic_cast<const NoisyOracleModel*>(noisy.get());
    ASSERT_NE(model, nullptr);
    EXPECT_DOUBLE_EQ(model->config().accuracy, 0.7);
    EXPECT_EQ(model->config().seed, 3u);
    o.spec = "noisy:1.3";
    EXPECT_THROW(make_predictor(o), ConfigError);
    o.spec = "noisy:abc";
    EXPECT_THROW(make_predictor(o), ConfigError);
    o.spec = "gbdt";
    EXPECT_THROW(make_predictor(o), ConfigError);
    o.spec = "empirical:/nonexistent/model.txt";
    EXPECT_THROW(make_predictor(o), ConfigError);
}

TEST(MakePredictor, EmpiricalFromFile) {
    const Trace t = small_trace(2, 500);
    const EmpiricalModel m = EmpiricalModel::train(training_rows(t));
    const std::string path = ::testing::TempDir() + "lava_model.txt";
    {
        std::ofstream out(path);
        m.save(out);
    }
    PredictorOptions o;
    o.spec = "empirical:" + path;
    const auto loaded = make_predictor(o);
    for (std::size_t i = 0; i < t.size(); i += 37) {
        const VmRecord v = t[i].to_vm();
        EXPECT_EQ(loaded->predict_remaining(v, 100.0), m.predict_remaining(v, 100.0));
    }
    std::remove(path.c_str());
}

TEST(SweepConfig, Validate) {
    SweepConfig s;
    EXPECT_NO_THROW(s.validate());
    s.accuracies = {0.5, 1.3};
    EXPECT_THROW(s.validate(), ConfigError);
    s = SweepConfig{};
    s.seeds = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = SweepConfig{};
    s.algorithms.clear();
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(CompareAlgorithms, NeedsTwo) {
    const Trace t = small_trace(1, 200);
    OracleModel oracle;
    EXPECT_THROW(compare_algorithms(t, oracle, small_sim(), {Algorithm::Nilas}), ConfigError);
}

TEST(CompareAlgorithms, DeltasAndDeterministicCsv) {
    const Trace t = small_trace(1);
    OracleModel oracle;
    const std::vector<Algorithm> algos = {Algorithm::BestFit, Algorithm::Nilas, Algorithm::Lava};
    const auto rows = compare_algorithms(t, oracle, small_sim(), algos);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].delta_pp, 0.0);
    for (const CompareRow& r : rows) {
        EXPECT_NEAR(r.delta_pp, r.empty_hosts_pct - rows[0].empty_hosts_pct, 1e-12);
        EXPECT_LE(r.empty_hosts_pct, r.optimal_empty_pct + 1e-9);
    }
    std::ostringstream a;
    std::ostringstream b;
    write_compare_csv(rows, a);
    write_compare_csv(compare_algorithms(t, oracle, small_sim(), algos), b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().rfind(std::string(kCompareMagic) + "\nalgorithm,empty_hosts_pct,", 0), 0u);
}

TEST(SweepAccuracy, RowsAndThreadInvariance) {
    const Trace t = small_trace(5, 1500);
    SweepConfig s;
    s.accuracies = {0.5, 1.0};
    s.seeds = 2;
    const auto serial = sweep_accuracy(t, small_sim(), s, NoisyOracleConfig{}, 1);
    const auto threaded = sweep_accuracy(t, small_sim(), s, NoisyOracleConfig{}, 3);
    ASSERT_EQ(serial.size(), 8u);
    std::ostringstream a;
    std::ostringstream b;
    write_sweep_csv(serial, a);
    write_sweep_csv(threaded, b);
    EXPECT_EQ(a.str(), b.str());
    for (const SweepRow& r : serial) {
        EXPECT_NEAR(r.improvement_pp, r.empty_pct - r.baseline_empty_pct, 1e-12);
    }
    const auto summary = summarize_sweep(serial);
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[0].accuracies, (std::vector<double>{0.5, 1.0}));
    s.accuracies = {1.3};
    EXPECT_THROW(sweep_accuracy(t, small_sim(), s, NoisyOracleConfig{}), ConfigError);
}

TEST(DefragCompare, DeterministicAndConsistent) {
    const Trace t = small_trace(6, 4000);
    OracleModel oracle;
    SimConfig c = small_sim();
    c.algorithm = Algorithm::Nilas;
    c.defrag.empty_host_trigger = 0.5;
    const DefragComparison d = defrag_compare(t, oracle, c);
    EXPECT_EQ(to_json(d).dump(), to_json(defrag_compare(t, oracle, c)).dump());
    EXPECT_EQ(d.lars_worse_instances, 0u);
    EXPECT_LE(d.reduction.lars, d.reduction.baseline);
    EXPECT_EQ(d.trace_order.instances.size(), d.lars.instances.size());
}

TEST(TheoremReport, ShapeAndControl) {
    TheoremSweepConfig cfg;
    cfg.ms = {10, 20};
    cfg.seeds = 3;
    cfg.base.horizon = 100.0;
    const TheoremReport r = theorem_report(cfg);
    EXPECT_EQ(r.points.size(), 6u);
    EXPECT_EQ(r.control.size(), 6u);
    for (const GapPoint& p : r.control) EXPECT_EQ(p.gap, 0.0);
    EXPECT_EQ(r.control_gap.mean, 0.0);
    std::ostringstream a;
    std::ostringstream b;
    write_theorem_csv(r, a);
    write_theorem_csv(theorem_report(cfg), b);
    EXPECT_EQ(a.str(), b.str());
    cfg.ms = {10};
    EXPECT_THROW(theorem_report(cfg), ConfigError);
    cfg.ms = {10, 20};
    cfg.base.S = 2.0;
    cfg.base.lambda = 0.4;
    EXPECT_THROW(theorem_report(cfg), InvalidArgument);
}

TEST(EvaluateModel, OverlapAndDeterministicStrata) {
    Trace train;
    Trace test;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const bool long_vm = i % 2 == 0;
        TraceRecord r = test::record(i + 1, static_cast<SimTime>(i), long_vm ? 800000 : 1200,
                                     ResourceVec::cores_gib(2, 8), long_vm ? "db" : "batch");
        (i < 150 ? train : test).push_back(r);
    }
    const EmpiricalModel m = EmpiricalModel::train(training_rows(train), EmpiricalConfig{900000, 10, 3600.0});
    const ModelReport clean = evaluate_model(m, test, train);
    EXPECT_EQ(clean.overlap, 0u);
    EXPECT_DOUBLE_EQ(clean.at_threshold.f1(), 1.0);
    for (const BinaryScores& q : clean.quantiles) EXPECT_DOUBLE_EQ(q.f1(), 1.0);
    Trace leaky = test;
    leaky.push_back(train.front());
    EXPECT_EQ(evaluate_model(m, leaky, train).overlap, 1u);
    EXPECT_EQ(evaluate_model(m, test, {}).overlap, 0u);
    const nlohmann::json j = to_json(clean);
    EXPECT_EQ(j["train_test_overlap"], 0);
    EXPECT_EQ(j["uptime_quantiles"].size(), kUptimeQuantiles);
}

TEST(RunConfigJson, ReflectsOverrides) {
    const RunConfig c = from_ini("[sim]\nhosts = 7\n[lava]\ndeadline_factor = 1.5\n");
    const nlohmann::json j = to_json(c);
    EXPECT_EQ(j["sim"]["hosts"], 7);
    EXPECT_EQ(j["lava"]["deadline_factor"], 1.5);
    EXPECT_EQ(j["nilas"]["position"], "above-binpacking");
    EXPECT_TRUE(j.contains("generator"));
}

}  // namespace
}  // namespace lava

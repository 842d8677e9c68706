#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lava/cli/config.hpp"
#include "lava/cli/experiments.hpp"
#include "lava/sim/report.hpp"
#include "lava/workload/generator.hpp"
#include "lava/workload/trace.hpp"

namespace fs = std::filesystem;
using namespace lava;

namespace {

struct Common {
    std::string trace;
    std::string config;
    std::string out;
    std::string predictor;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    bool cold_start = false;
    std::string nilas_position;
};

void add_common(CLI::App* cmd, Common& c, bool needs_trace) {
    auto* t = cmd->add_option("--trace", c.trace, "trace file");
    if (needs_trace) t->required()->check(CLI::ExistingFile);
    cmd->add_option("--config", c.config, "INI config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "output directory")->required();
    cmd->add_option("--predictor", c.predictor, "oracle | noisy:<acc> | empirical:<model file>");
    cmd->add_option("--seed", c.seed, "seed for noise, generation and theorem runs");
    cmd->add_option("--jobs", c.jobs, "parallel simulations")->check(CLI::PositiveNumber);
    cmd->add_flag("--cold-start", c.cold_start, "skip warm-up and start from an empty pool");
    cmd->add_option("--nilas-position", c.nilas_position, "above-binpacking | highest")
        ->check(CLI::IsMember({"above-binpacking", "highest"}));
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = load_config(c.config);
    if (!c.predictor.empty()) cfg.predictor.spec = c.predictor;
    if (c.seed) {
        cfg.predictor.noisy.seed = *c.seed;
        cfg.generator.seed = *c.seed;
        cfg.theorem.base.seed = *c.seed;
    }
    if (c.cold_start) cfg.sim.warm_up = false;
    if (!c.nilas_position.empty()) {
        cfg.sim.sched.nilas.position = parse_nilas_position(c.nilas_position);
        cfg.sim.sched.lava.nilas.position = cfg.sim.sched.nilas.position;
    }
    cfg.sim.validate();
    return cfg;
}

fs::path out_dir(const std::string& out) {
    fs::path p(out);
    fs::create_directories(p);
    return p;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write '" + p.string() + "'");
    return os;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    std::ofstream os = open_out(p);
    os << j.dump(2) << '\n';
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    for (const std::string& n : names) {
        std::size_t start = 0;
        while (start <= n.size()) {
            const std::size_t comma = n.find(',', start);
            const std::string item = n.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!item.empty()) out.push_back(parse_algorithm(item));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

int cmd_run(const Common& c, const std::string& algo) {
    RunConfig cfg = resolve(c);
    if (!algo.empty()) cfg.sim.algorithm = parse_algorithm(algo);
    cfg.sim.record_placements = true;
    const Trace trace = load_trace(c.trace);
    const auto model = make_predictor(cfg.predictor);
    const MetricSeries series = run_simulation(trace, *model, cfg.sim);
    const fs::path dir = out_dir(c.out);
    {
        std::ofstream os = open_out(dir / "series.csv");
        write_series_csv(series, os);
    }
    {
        std::ofstream os = open_out(dir / "placements.log");
        write_placement_log(series, os);
    }
    nlohmann::json summary = summarize(series);
    summary["algorithm"] = to_string(cfg.sim.algorithm);
    summary["predictor"] = model->describe();
    summary["trace"] = c.trace;
    summary["config"] = to_json(cfg);
    write_json(dir / "summary.json", summary);
    if (cfg.sim.defrag.enabled) {
        std::ofstream os = open_out(dir / "migrations.log");
        write_defrag_log(series.migration_log, os);
    }
    std::printf("%s: mean empty hosts %.3f%%\n", std::string(to_string(cfg.sim.algorithm)).c_str(),
                series.mean_empty_hosts_pct());
    return 0;
}

int cmd_compare(const Common& c, const std::vector<std::string>& algos) {
    const RunConfig cfg = resolve(c);
    const std::vector<Algorithm> list = parse_algorithms(algos);
    const Trace trace = load_trace(c.trace);
    const auto model = make_predictor(cfg.predictor);
    const std::vector<CompareRow> rows = compare_algorithms(trace, *model, cfg.sim, list);
    const fs::path dir = out_dir(c.out);
    {
        std::ofstream os = open_out(dir / "compare.csv");
        write_compare_csv(rows, os);
    }
    write_json(dir / "config.json", to_json(cfg));
    write_compare_csv(rows, std::cout);
    return 0;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& algos, const std::string& grid,
              std::optional<std::size_t> seeds) {
    RunConfig cfg = resolve(c);
    if (!algos.empty()) cfg.sweep.algorithms = parse_algorithms(algos);
    if (!grid.empty()) cfg.sweep.accuracies = parse_number_list(grid);
    if (seeds) cfg.sweep.seeds = *seeds;
    cfg.sweep.validate();
    const Trace trace = load_trace(c.trace);
    const std::vector<SweepRow> rows = sweep_accuracy(trace, cfg.sim, cfg.sweep, cfg.predictor.noisy, c.jobs);
    const fs::path dir = out_dir(c.out);
    {
        std::ofstream os = open_out(dir / "sweep.csv");
        write_sweep_csv(rows, os);
    }
    nlohmann::json summary = nlohmann::json::array();
    for (const SweepSummary& s : summarize_sweep(rows)) {
        summary.push_back({{"algorithm", to_string(s.algorithm)},
                           {"spearman", s.spearman},
                           {"accuracies", s.accuracies},
                           {"mean_improvement_pp", s.mean_improvement_pp}});
        std::printf("%s: spearman %.3f\n", std::string(to_string(s.algorithm)).c_str(), s.spearman);
    }
    write_json(dir / "sweep_summary.json", {{"summary", summary}, {"config", to_json(cfg)}});
    return 0;
}

int cmd_defrag(const Common& c, const std::string& algo) {
    RunConfig cfg = resolve(c);
    if (!algo.empty()) cfg.sim.algorithm = parse_algorithm(algo);
    cfg.sim.defrag.enabled = true;
    const Trace trace = load_trace(c.trace);
    const auto model = make_predictor(cfg.predictor);
    const DefragComparison d = defrag_compare(trace, *model, cfg.sim);
    nlohmann::json j = to_json(d);
    j["config"] = to_json(cfg);
    write_json(out_dir(c.out) / "defrag.json", j);
    std::printf("instances %zu, trace-order migrations %zu, lars migrations %zu, reduction %.3f%%\n",
                d.trace_order.instances.size(), d.reduction.baseline, d.reduction.lars, 100.0 * d.reduction.reduction);
    return 0;
}

int cmd_theorem(const Common& c) {
    const RunConfig cfg = resolve(c);
    const TheoremReport r = theorem_report(cfg.theorem);
    const fs::path dir = out_dir(c.out);
    {
        std::ofstream os = open_out(dir / "theorem.csv");
        write_theorem_csv(r, os);
    }
    nlohmann::json j = to_json(r);
    j["config"] = to_json(cfg)["theorem"];
    write_json(dir / "theorem.json", j);
    std::printf("slope %.4f (p = %.3g), control mean gap %.3f (p = %.3g)\n", r.slope.slope, r.slope.p_value,
                r.control_gap.mean, r.control_gap.p_value);
    return 0;
}

int cmd_train(const Common& c) {
    const RunConfig cfg = resolve(c);
    const Trace trace = load_trace(c.trace);
    const std::vector<TrainingRow> rows = training_rows(trace);
    const EmpiricalModel model = EmpiricalModel::train(rows, cfg.empirical);
    fs::path p(c.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os = open_out(p);
    model.save(os);
    std::printf("trained on %zu rows, %zu strata\n", rows.size(), model.strata().size());
    return 0;
}

int cmd_eval(const Common& c, const std::string& test_path, const std::string& model_path) {
    RunConfig cfg = resolve(c);
    if (!model_path.empty()) cfg.predictor.spec = "empirical:" + model_path;
    const Trace test = load_trace(test_path);
    const Trace train = c.trace.empty() ? Trace{} : load_trace(c.trace);
    const auto model = make_predictor(cfg.predictor);
    const ModelReport r = evaluate_model(*model, test, train);
    if (r.overlap > 0) std::fprintf(stderr, "warning: %zu VM ids appear in both training and test traces\n", r.overlap);
    nlohmann::json j = to_json(r);
    j["predictor"] = model->describe();
    write_json(out_dir(c.out) / "model_report.json", j);
    std::printf("precision %.4f recall %.4f f1 %.4f at creation\n", r.at_threshold.precision(),
                r.at_threshold.recall(), r.at_threshold.f1());
    return 0;
}

int cmd_generate(const Common& c, const std::string& preset, std::optional<std::size_t> num_vms) {
    RunConfig cfg = resolve(c);
    if (preset == "bimodal") {
        const std::uint64_t seed = cfg.generator.seed;
        cfg.generator = bimodal_generator_config();
        cfg.generator.seed = seed;
    } else if (preset != "default") {
        throw ConfigError("unknown preset '" + preset + "'");
    }
    if (num_vms) cfg.generator.num_vms = *num_vms;
    const Trace trace = generate(cfg.generator);
    fs::path p(c.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    save_trace(trace, p.string());
    const SkewStats s = skew_stats(trace);
    std::printf("%zu VMs, short fraction %.4f, long core-hour share %.4f\n", trace.size(), s.short_vm_fraction,
                s.long_core_hour_share);
    return 0;
}

int cmd_split(const Common& c, double frac, const std::string& test_out) {
    const Trace trace = load_trace(c.trace);
    const auto [train, test] = split_trace(trace, frac);
    save_trace(train, c.out);
    save_trace(test, test_out);
    std::printf("train %zu, test %zu\n", train.size(), test.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lifetime-aware VM scheduling simulator"};
    app.require_subcommand(1);

    Common run_c;
    std::string run_algo;
    auto* run = app.add_subcommand("run", "simulate one algorithm on a trace");
    add_common(run, run_c, true);
    run->add_option("--algo", run_algo, "baseline | la-binary | nilas | lava");

    Common cmp_c;
    std::vector<std::string> cmp_algos = {"baseline,la-binary,nilas,lava"};
    auto* cmp = app.add_subcommand("compare", "simulate several algorithms; deltas against the first");
    add_common(cmp, cmp_c, true);
    cmp->add_option("--algo", cmp_algos, "algorithms, comma separated or repeated");

    Common sw_c;
    std::vector<std::string> sw_algos;
    std::string sw_grid;
    std::optional<std::size_t> sw_seeds;
    auto* sw = app.add_subcommand("sweep-accuracy", "improvement over baseline across noisy-oracle accuracies");
    add_common(sw, sw_c, true);
    sw->add_option("--algo", sw_algos, "algorithms, comma separated or repeated");
    sw->add_option("--grid", sw_grid, "accuracies, comma separated");
    sw->add_option("--seeds", sw_seeds, "noise seeds per accuracy");

    Common df_c;
    std::string df_algo;
    auto* df = app.add_subcommand("defrag-compare", "migrations under trace order and LARS");
    add_common(df, df_c, true);
    df->add_option("--algo", df_algo, "placement algorithm during the runs");

    Common th_c;
    auto* th = app.add_subcommand("theorem", "two-class learning experiment");
    add_common(th, th_c, false);

    Common tr_c;
    auto* tr = app.add_subcommand("train", "fit the empirical survival model; --out is the model file");
    add_common(tr, tr_c, true);

    Common ev_c;
    std::string ev_test;
    std::string ev_model;
    auto* ev = app.add_subcommand("eval-model", "accuracy report; --trace is the training trace for overlap checks");
    add_common(ev, ev_c, false);
    ev->add_option("--test", ev_test, "test trace")->required()->check(CLI::ExistingFile);
    ev->add_option("--model", ev_model, "model file (shorthand for --predictor empirical:<file>)");

    Common gen_c;
    std::string gen_preset = "default";
    std::optional<std::size_t> gen_vms;
    auto* gen = app.add_subcommand("generate", "write a synthetic trace; --out is the trace file");
    add_common(gen, gen_c, false);
    gen->add_option("--preset", gen_preset, "default | bimodal")->check(CLI::IsMember({"default", "bimodal"}));
    gen->add_option("--num-vms", gen_vms, "VMs created at or after t = 0");

    Common sp_c;
    double sp_frac = 0.5;
    std::string sp_test;
    auto* sp = app.add_subcommand("split", "hash split of a trace; --out is the training trace");
    add_common(sp, sp_c, true);
    sp->add_option("--train-frac", sp_frac, "expected training fraction")->check(CLI::Range(0.0, 1.0));
    sp->add_option("--test-out", sp_test, "test trace file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_c, run_algo);
        if (*cmp) return cmd_compare(cmp_c, cmp_algos);
        if (*sw) return cmd_sweep(sw_c, sw_algos, sw_grid, sw_seeds);
        if (*df) return cmd_defrag(df_c, df_algo);
        if (*th) return cmd_theorem(th_c);
        if (*tr) return cmd_train(tr_c);
        if (*ev) return cmd_eval(ev_c, ev_test, ev_model);
        if (*gen) return cmd_generate(gen_c, gen_preset, gen_vms);
        if (*sp) return cmd_split(sp_c, sp_frac, sp_test);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}

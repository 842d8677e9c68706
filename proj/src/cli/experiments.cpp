#include "lava/cli/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "lava/sim/report.hpp"

namespace lava {

std::vector<CompareRow> compare_algorithms(const Trace& trace, const LifetimeModel& model, const SimConfig& cfg,
                                           const std::vector<Algorithm>& algorithms) {
    if (algorithms.size() < 2) throw ConfigError("compare needs at least two algorithms");
    std::vector<CompareRow> rows;
    for (Algorithm a : algorithms) {
        SimConfig c = cfg;
        c.algorithm = a;
        const MetricSeries s = run_simulation(trace, model, c);
        CompareRow r;
        r.algorithm = a;
        r.empty_hosts_pct = s.mean_empty_hosts_pct();
        r.empty_to_free_ratio = s.mean_empty_to_free();
        r.packing_density = s.mean_packing_density();
        r.optimal_empty_pct = s.mean_optimal_empty_pct();
        r.scheduling_failures = s.scheduling_failures;
        r.deadline_promotions = s.deadline_promotions;
        rows.push_back(r);
    }
    for (CompareRow& r : rows) r.delta_pp = r.empty_hosts_pct - rows.front().empty_hosts_pct;
    return rows;
}

void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& os) {
    os << kCompareMagic << '\n'
       << "algorithm,empty_hosts_pct,empty_to_free_ratio,packing_density,optimal_empty_pct,delta_pp,"
          "scheduling_failures,deadline_promotions\n";
    for (const CompareRow& r : rows) {
        os << to_string(r.algorithm) << ',' << fixed(r.empty_hosts_pct) << ',' << fixed(r.empty_to_free_ratio) << ','
           << fixed(r.packing_density) << ',' << fixed(r.optimal_empty_pct) << ',' << fixed(r.delta_pp) << ','
           << r.scheduling_failures << ',' << r.deadline_promotions << '\n';
    }
}

namespace {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename F>
void parallel_for(std::size_t n, std::size_t jobs, F&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SweepRow> sweep_accuracy(const Trace& trace, const SimConfig& cfg, const SweepConfig& sweep,
                                     const NoisyOracleConfig& noise, std::size_t jobs) {
    sweep.validate();
    struct Task {
        double accuracy;
        std::uint64_t seed;
        Algorithm algorithm;
        double empty = 0.0;
    };
    std::vector<Task> tasks;
    for (double acc : sweep.accuracies) {
        for (std::size_t s = 0; s < sweep.seeds; ++s) {
            const std::uint64_t seed = noise.seed + s;
            tasks.push_back({acc, seed, Algorithm::BestFit});
            for (Algorithm a : sweep.algorithms) {
                if (a != Algorithm::BestFit) tasks.push_back({acc, seed, a});
            }
        }
    }
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        Task& t = tasks[i];
        NoisyOracleConfig nc = noise;
        nc.accuracy = t.accuracy;
        nc.seed = t.seed;
        const NoisyOracleModel model(nc);
        SimConfig c = cfg;
        c.algorithm = t.algorithm;
        t.empty = run_simulation(trace, model, c).mean_empty_hosts_pct();
    });
    std::map<std::pair<double, std::uint64_t>, double> baseline;
    for (const Task& t : tasks) {
        if (t.algorithm == Algorithm::BestFit) baseline[{t.accuracy, t.seed}] = t.empty;
    }
    std::vector<SweepRow> rows;
    for (Algorithm a : sweep.algorithms) {
        for (const Task& t : tasks) {
            if (t.algorithm != a) continue;
            const double base = baseline.at({t.accuracy, t.seed});
            rows.push_back({a, t.accuracy, t.seed, base, t.empty, t.empty - base});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
        return std::tuple(static_cast<int>(x.algorithm), x.accuracy, x.seed) <
               std::tuple(static_cast<int>(y.algorithm), y.accuracy, y.seed);
    });
    return rows;
}

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows) {
    std::map<int, std::vector<const SweepRow*>> by_algo;
    for (const SweepRow& r : rows) by_algo[static_cast<int>(r.algorithm)].push_back(&r);
    std::vector<SweepSummary> out;
    for (const auto& [algo, group] : by_algo) {
        SweepSummary s;
        s.algorithm = static_cast<Algorithm>(algo);
        std::vector<double> xs;
        std::vector<double> ys;
        std::map<double, std::pair<double, std::size_t>> cell;
        for (const SweepRow* r : group) {
            xs.push_back(r->accuracy);
            ys.push_back(r->improvement_pp);
            auto& c = cell[r->accuracy];
            c.first += r->improvement_pp;
            ++c.second;
        }
        s.spearman = spearman(xs, ys);
        for (const auto& [acc, c] : cell) {
            s.accuracies.push_back(acc);
            s.mean_improvement_pp.push_back(c.first / static_cast<double>(c.second));
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << kSweepMagic << '\n' << "algorithm,accuracy,seed,baseline_empty_pct,empty_pct,improvement_pp\n";
    for (const SweepRow& r : rows) {
        os << to_string(r.algorithm) << ',' << fixed(r.accuracy, 3) << ',' << r.seed << ','
           << fixed(r.baseline_empty_pct) << ',' << fixed(r.empty_pct) << ',' << fixed(r.improvement_pp) << '\n';
    }
}

DefragComparison defrag_compare(const Trace& trace, const LifetimeModel& model, SimConfig cfg) {
    cfg.defrag.enabled = true;
    DefragComparison d;
    cfg.defrag.ordering = MigrationOrder::TraceOrder;
    const MetricSeries base = run_simulation(trace, model, cfg);
    cfg.defrag.ordering = MigrationOrder::Lars;
    const MetricSeries lars = run_simulation(trace, model, cfg);
    d.integrated_trace_migrations = base.migrations;
    d.integrated_trace_cancelled = base.migrations_cancelled;
    d.integrated_lars_migrations = lars.migrations;
    d.integrated_lars_cancelled = lars.migrations_cancelled;

    const std::size_t k = cfg.defrag.max_concurrent;
    const SimTime dur = cfg.defrag.migration_duration_s;
    d.trace_order = replay_all(base.evacuations, MigrationOrder::TraceOrder, k, dur);
    d.lars = replay_all(base.evacuations, MigrationOrder::Lars, k, dur);
    d.reduction = count_saved_migrations(d.trace_order, d.lars);
    for (std::size_t i = 0; i < d.lars.results.size(); ++i) {
        if (d.lars.results[i].migrations > d.trace_order.results[i].migrations) ++d.lars_worse_instances;
    }
    return d;
}

nlohmann::json to_json(const DefragComparison& d) {
    nlohmann::json j;
    j["instances"] = d.trace_order.instances.size();
    j["replay"] = {{"trace_migrations", d.reduction.baseline},
                   {"lars_migrations", d.reduction.lars},
                   {"trace_cancelled", d.trace_order.cancelled()},
                   {"lars_cancelled", d.lars.cancelled()},
                   {"reduction_pct", 100.0 * d.reduction.reduction},
                   {"lars_worse_instances", d.lars_worse_instances}};
    j["integrated"] = {{"trace_migrations", d.integrated_trace_migrations},
                       {"trace_cancelled", d.integrated_trace_cancelled},
                       {"lars_migrations", d.integrated_lars_migrations},
                       {"lars_cancelled", d.integrated_lars_cancelled}};
    nlohmann::json per_host = nlohmann::json::array();
    for (std::size_t i = 0; i < d.trace_order.instances.size(); ++i) {
        const EvacuationInstance& inst = d.trace_order.instances[i];
        per_host.push_back({{"host", inst.host.value},
                            {"start_s", inst.start},
                            {"vms", inst.vms.size()},
                            {"trace_migrations", d.trace_order.results[i].migrations},
                            {"lars_migrations", d.lars.results[i].migrations}});
    }
    j["per_instance"] = per_host;
    return j;
}

TheoremReport theorem_report(const TheoremSweepConfig& cfg) {
    if (cfg.ms.size() < 2) throw ConfigError("theorem sweep needs at least two values of m");
    TheoremReport r;
    r.epsilon = cfg.base.epsilon;
    r.points = gap_sweep(cfg.base, cfg.ms, cfg.seeds);
    TheoremConfig control = cfg.base;
    control.epsilon = 0.0;
    r.control = gap_sweep(control, cfg.ms, cfg.seeds);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const GapPoint& p : r.points) {
        xs.push_back(static_cast<double>(p.m));
        ys.push_back(p.gap);
    }
    r.slope = linear_regression(xs, ys);
    std::vector<double> control_gaps;
    for (const GapPoint& p : r.control) control_gaps.push_back(p.gap);
    r.control_gap = one_sample_t(control_gaps);
    return r;
}

void write_theorem_csv(const TheoremReport& r, std::ostream& os) {
    os << kTheoremMagic << '\n'
       << "epsilon,m,seed,peak_no_learning,peak_learning,gap,mean_no_learning,mean_learning,mispredicted_long\n";
    auto rows = [&](const std::vector<GapPoint>& pts, double eps) {
        for (const GapPoint& p : pts) {
            os << fixed(eps, 4) << ',' << p.m << ',' << p.seed << ',' << p.result.no_learning.peak_hosts << ','
               << p.result.learning.peak_hosts << ',' << fixed(p.gap, 1) << ',' << fixed(p.result.no_learning.mean_hosts)
               << ',' << fixed(p.result.learning.mean_hosts) << ',' << p.result.no_learning.mispredicted_long << '\n';
        }
    };
    rows(r.points, r.epsilon);
    rows(r.control, 0.0);
}

nlohmann::json to_json(const TheoremReport& r) {
    return {{"epsilon", r.epsilon},
            {"slope", r.slope.slope},
            {"intercept", r.slope.intercept},
            {"slope_stderr", r.slope.slope_stderr},
            {"slope_p_value", r.slope.p_value},
            {"n", r.slope.n},
            {"control_mean_gap", r.control_gap.mean},
            {"control_p_value", r.control_gap.p_value}};
}

std::vector<TrainingRow> training_rows(const Trace& trace) {
    std::vector<TrainingRow> rows;
    rows.reserve(trace.size());
    for (const TraceRecord& r : trace) rows.push_back({r.features, r.lifetime_s});
    return rows;
}

ModelReport evaluate_model(const LifetimeModel& model, const Trace& test, const Trace& train) {
    ModelReport r;
    r.quantiles = uptime_quantile_accuracy(model, test);
    r.at_threshold = r.quantiles[0];
    r.log_error = log_error_histogram(model, test);
    std::unordered_set<VmId> train_ids;
    for (const TraceRecord& t : train) train_ids.insert(t.id);
    for (const TraceRecord& t : test) r.overlap += train_ids.count(t.id);
    return r;
}

nlohmann::json to_json(const ModelReport& r) {
    auto scores = [](const BinaryScores& s) {
        return nlohmann::json{{"tp", s.tp},
                              {"fp", s.fp},
                              {"tn", s.tn},
                              {"fn", s.fn},
                              {"precision", s.precision()},
                              {"recall", s.recall()},
                              {"f1", s.f1()}};
    };
    nlohmann::json q = nlohmann::json::array();
    for (std::size_t i = 0; i < r.quantiles.size(); ++i) {
        nlohmann::json e = scores(r.quantiles[i]);
        e["quantile"] = i;
        q.push_back(e);
    }
    return {{"threshold_s", kLongThresholdS},
            {"at_creation", scores(r.at_threshold)},
            {"log_error", {{"edges", r.log_error.edges}, {"counts", r.log_error.counts}, {"mean", r.log_error.mean}}},
            {"uptime_quantiles", q},
            {"train_test_overlap", r.overlap}};
}

}  // namespace lava

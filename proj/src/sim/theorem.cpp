#include "lava/sim/theorem.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include "lava/core/hash.hpp"

namespace lava {

void TheoremConfig::validate() const {
    if (m == 0 || k == 0) throw InvalidArgument("m and k must be positive");
    if (!(S > 0.0) || !(S < L)) throw InvalidArgument("need 0 < S < L");
    if (!(lambda >= 1.0 / S)) throw InvalidArgument("lambda must be >= 1/S");
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must be in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must be in [0, 1]");
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    if (!(warmup_frac >= 0.0 && warmup_frac < 1.0)) throw InvalidArgument("warmup_frac must be in [0, 1)");
}

double TheoremResult::gap() const {
    return static_cast<double>(no_learning.peak_hosts) - static_cast<double>(learning.peak_hosts);
}

namespace {

struct Job {
    double arrival;
    bool is_long;
    bool predicted_long;
};

std::vector<Job> arrival_stream(const TheoremConfig& cfg) {
    std::mt19937_64 rng(mix64(cfg.seed));
    std::exponential_distribution<double> gap(static_cast<double>(cfg.m) * cfg.lambda);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Job> jobs;
    for (double t = gap(rng); t < cfg.horizon; t += gap(rng)) {
        const bool is_long = u(rng) < cfg.rho;
        const bool flipped = u(rng) < cfg.epsilon;
        jobs.push_back({t, is_long, is_long != flipped});
    }
    return jobs;
}

enum class Ev { Exit = 0, Learn = 1 };

struct Pending {
    double time;
    Ev kind;
    std::size_t job;
    bool operator>(const Pending& o) const {
        if (time != o.time) return time > o.time;
        if (kind != o.kind) return kind > o.kind;
        return job > o.job;
    }
};

class TwoClassSim {
public:
    TwoClassSim(const TheoremConfig& cfg, bool learning) : cfg_(cfg), learning_(learning) {}

    TheoremRun run(const std::vector<Job>& jobs) {
        TheoremRun r;
        r.jobs = jobs.size();
        job_host_.assign(jobs.size(), kNone);
        const double measure_from = cfg_.warmup_frac * cfg_.horizon;
        double last = 0.0;
        double area = 0.0;
        auto advance = [&](double t) {
            if (t > measure_from) area += static_cast<double>(in_use_) * (t - std::max(last, measure_from));
            last = t;
        };
        std::size_t next = 0;
        while (next < jobs.size() || !pending_.empty()) {
            const bool take_event = !pending_.empty() && (next >= jobs.size() || pending_.top().time <= jobs[next].arrival);
            const double t = take_event ? pending_.top().time : jobs[next].arrival;
            if (t > cfg_.horizon) break;
            advance(t);
            if (take_event) {
                const Pending p = pending_.top();
                pending_.pop();
                if (p.kind == Ev::Exit) {
                    depart(p.job);
                } else if (job_host_[p.job] != kNone) {
                    relabel_long(job_host_[p.job]);
                }
                continue;
            }
            const Job& j = jobs[next];
            if (j.is_long && !j.predicted_long) ++r.mispredicted_long;
            admit(next, j);
            if (t >= measure_from) r.peak_hosts = std::max(r.peak_hosts, in_use_);
            ++next;
        }
        advance(cfg_.horizon);
        r.mean_hosts = area / (cfg_.horizon - measure_from);
        return r;
    }

private:
    static constexpr std::size_t kNone = ~std::size_t{0};

    struct Host {
        std::size_t count = 0;
        bool label_long = false;
    };

    // Non-full hosts per label, fullest first, then lowest id.
    using OpenSet = std::set<std::pair<std::ptrdiff_t, std::size_t>>;
    OpenSet& open(bool label_long) { return label_long ? open_long_ : open_short_; }

    void unlist(std::size_t h) {
        const Host& host = hosts_[h];
        if (host.count < cfg_.k) open(host.label_long).erase({-static_cast<std::ptrdiff_t>(host.count), h});
    }
    void list(std::size_t h) {
        const Host& host = hosts_[h];
        if (host.count > 0 && host.count < cfg_.k) open(host.label_long).insert({-static_cast<std::ptrdiff_t>(host.count), h});
    }

    void admit(std::size_t id, const Job& j) {
        OpenSet& candidates = open(j.predicted_long);
        std::size_t h;
        if (!candidates.empty()) {
            h = candidates.begin()->second;
            unlist(h);
        } else if (!free_ids_.empty()) {
            h = free_ids_.back();
            free_ids_.pop_back();
            hosts_[h] = Host{0, j.predicted_long};
            ++in_use_;
        } else {
            h = hosts_.size();
            hosts_.push_back(Host{0, j.predicted_long});
            ++in_use_;
        }
        ++hosts_[h].count;
        list(h);
        job_host_[id] = h;
        pending_.push({j.arrival + (j.is_long ? cfg_.L : cfg_.S), Ev::Exit, id});
        if (learning_ && j.is_long) pending_.push({j.arrival + cfg_.S, Ev::Learn, id});
    }

    void depart(std::size_t id) {
        const std::size_t h = job_host_[id];
        job_host_[id] = kNone;
        unlist(h);
        if (--hosts_[h].count == 0) {
            --in_use_;
            free_ids_.push_back(h);
            return;
        }
        list(h);
    }

    void relabel_long(std::size_t h) {
        if (hosts_[h].label_long) return;
        unlist(h);
        hosts_[h].label_long = true;
        list(h);
    }

    const TheoremConfig& cfg_;
    bool learning_;
    std::vector<Host> hosts_;
    std::vector<std::size_t> free_ids_;
    std::vector<std::size_t> job_host_;
    OpenSet open_short_;
    OpenSet open_long_;
    std::size_t in_use_ = 0;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
};

}  // namespace

TheoremRun two_class_policy(const TheoremConfig& cfg, bool learning) {
    cfg.validate();
    return TwoClassSim(cfg, learning).run(arrival_stream(cfg));
}

TheoremResult two_class_experiment(const TheoremConfig& cfg) {
    cfg.validate();
    const std::vector<Job> jobs = arrival_stream(cfg);
    return {TwoClassSim(cfg, false).run(jobs), TwoClassSim(cfg, true).run(jobs)};
}

double misprediction_probability(double epsilon, double rho, double lambda, double x) {
    return 1.0 - std::pow(1.0 - epsilon, rho * lambda * x);
}

double misprediction_probability_mc(double epsilon, double rho, double lambda, double x, std::size_t trials,
                                    std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(std::llround(rho * lambda * x));
    std::mt19937_64 rng(mix64(seed));
    std::bernoulli_distribution wrong(epsilon);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) any = wrong(rng) || any;
        hits += any ? 1 : 0;
    }
    return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
}

std::vector<GapPoint> gap_sweep(const TheoremConfig& cfg, const std::vector<std::size_t>& ms, std::size_t seeds) {
    std::vector<GapPoint> out;
    for (std::size_t m : ms) {
        for (std::size_t s = 0; s < seeds; ++s) {
            TheoremConfig c = cfg;
            c.m = m;
            c.seed = cfg.seed + s;
            GapPoint p{m, c.seed, 0.0, two_class_experiment(c)};
            p.gap = p.result.gap();
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace lava

#include "lava/workload/generator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lava/workload/generator_json.hpp"

namespace lava {

namespace {

double lognormal10_mean_h(const LognormalComponent& c) {
    const double s = c.sigma_log10_h * std::numbers::ln10;
    return std::pow(10.0, c.mu_log10_h) * std::exp(0.5 * s * s);
}

double total_weight(const auto& items) {
    return std::accumulate(items.begin(), items.end(), 0.0, [](double a, const auto& x) { return a + x.weight; });
}

std::discrete_distribution<std::size_t> weights_of(const auto& items) {
    std::vector<double> w;
    w.reserve(items.size());
    for (const auto& x : items) w.push_back(x.weight);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

void check_weights(const auto& items, const std::string& what) {
    if (items.empty()) throw InvalidArgument(what + " must not be empty");
    for (const auto& x : items) {
        if (!(x.weight > 0.0)) throw InvalidArgument(what + " weights must be positive");
    }
    if (std::abs(total_weight(items) - 1.0) > 1e-6) throw InvalidArgument(what + " weights must sum to 1");
}

ShapeWeight sw(std::int64_t cores, std::int64_t gib, double w) { return {ResourceVec::cores_gib(cores, gib), w}; }

}  // namespace

void GeneratorConfig::validate() const {
    if (hosts == 0) throw InvalidArgument("hosts must be positive");
    if (host_capacity.cpu_milli <= 0 || host_capacity.mem_mib <= 0) throw InvalidArgument("host capacity must be positive");
    if (arrival_rate_per_h < 0.0) throw InvalidArgument("arrival_rate_per_h must be >= 0");
    if (arrival_rate_per_h == 0.0 && !(target_util > 0.0 && target_util < 1.0)) {
        throw InvalidArgument("target_util must be in (0, 1)");
    }
    if (min_lifetime_s <= 0 || max_lifetime_s < min_lifetime_s) throw InvalidArgument("bad lifetime clamp");
    if (prefill_window_s < 0) throw InvalidArgument("prefill_window_s must be >= 0");
    if (zones.empty()) throw InvalidArgument("zones must not be empty");
    check_weights(strata, "strata");
    for (const StratumSpec& s : strata) {
        check_weights(s.lifetime, "lifetime mixture of " + s.name);
        check_weights(s.shapes, "shape mix of " + s.name);
        for (const auto& c : s.lifetime) {
            if (!(c.sigma_log10_h >= 0.0)) throw InvalidArgument("sigma must be >= 0");
        }
        for (const auto& sh : s.shapes) {
            if (sh.shape.cpu_milli <= 0 || sh.shape.mem_mib <= 0 || !fits_within(sh.shape, host_capacity)) {
                throw InvalidArgument("shape in " + s.name + " must be positive and fit a host");
            }
        }
    }
}

double GeneratorConfig::expected_core_hours_per_vm() const {
    double total = 0.0;
    for (const StratumSpec& s : strata) {
        double life = 0.0;
        for (const auto& c : s.lifetime) life += c.weight * lognormal10_mean_h(c);
        double cores = 0.0;
        for (const auto& sh : s.shapes) cores += sh.weight * sh.shape.cores();
        total += s.weight * life * cores;
    }
    return total;
}

double GeneratorConfig::arrival_rate() const {
    if (arrival_rate_per_h > 0.0) return arrival_rate_per_h;
    const double pool_cores = static_cast<double>(hosts) * host_capacity.cores();
    return target_util * pool_cores / expected_core_hours_per_vm();
}

GeneratorConfig default_generator_config() {
    GeneratorConfig cfg;
    cfg.strata = {
        {"batch", 0.54, {{1.0, -0.70, 0.30}},
         {sw(1, 4, 0.20), sw(2, 8, 0.30), sw(4, 16, 0.30), sw(8, 32, 0.15), sw(16, 64, 0.05)},
         "n2", "batch", "low", false, true},
        {"ci", 0.25, {{1.0, -0.50, 0.25}},
         {sw(2, 8, 0.25), sw(4, 16, 0.35), sw(8, 32, 0.20), sw(4, 8, 0.10), sw(8, 16, 0.10)},
         "c2", "ci", "medium", false, false},
        {"dev", 0.12, {{0.85, -0.80, 0.30}, {0.15, 1.00, 0.40}},
         {sw(1, 4, 0.25), sw(2, 8, 0.30), sw(4, 16, 0.30), sw(8, 32, 0.15)},
         "e2", "dev", "medium", false, false},
        {"service", 0.06, {{1.0, 1.20, 0.50}},
         {sw(4, 16, 0.30), sw(8, 32, 0.35), sw(16, 64, 0.20), sw(8, 64, 0.15)},
         "n2", "service", "high", false, false},
        {"infra", 0.03, {{1.0, 1.90, 0.30}},
         {sw(8, 32, 0.35), sw(16, 64, 0.35), sw(32, 128, 0.15), sw(16, 128, 0.15)},
         "m1", "infra", "high", true, false},
    };
    return cfg;
}

GeneratorConfig bimodal_generator_config() {
    GeneratorConfig cfg;
    cfg.strata = {
        {"short-or-week", 0.6, {{0.7, -0.7, 0.2}, {0.3, 2.6, 0.1}}, {sw(2, 8, 0.5), sw(4, 16, 0.5)},
         "n2", "batch", "low", false, false},
        {"hours-or-week", 0.4, {{0.6, 0.5, 0.2}, {0.4, 2.6, 0.1}}, {sw(4, 16, 0.5), sw(8, 32, 0.5)},
         "n2", "service", "high", false, false},
    };
    return cfg;
}

Trace generate(const GeneratorConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    auto pick_stratum = weights_of(cfg.strata);
    std::vector<std::discrete_distribution<std::size_t>> pick_component;
    std::vector<std::discrete_distribution<std::size_t>> pick_shape;
    for (const StratumSpec& s : cfg.strata) {
        pick_component.push_back(weights_of(s.lifetime));
        pick_shape.push_back(weights_of(s.shapes));
    }
    std::uniform_int_distribution<std::size_t> pick_zone(0, cfg.zones.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> gap(cfg.arrival_rate() / static_cast<double>(kHour));

    auto draw = [&](SimTime create) {
        const std::size_t si = pick_stratum(rng);
        const StratumSpec& s = cfg.strata[si];
        const LognormalComponent& c = s.lifetime[pick_component[si](rng)];
        const double hours = std::pow(10.0, c.mu_log10_h + c.sigma_log10_h * normal(rng));
        TraceRecord r;
        r.create_time = create;
        r.lifetime_s = std::clamp<SimTime>(std::llround(hours * static_cast<double>(kHour)), cfg.min_lifetime_s,
                                           cfg.max_lifetime_s);
        r.shape = s.shapes[pick_shape[si](rng)].shape;
        r.features.zone = cfg.zones[pick_zone(rng)];
        r.features.vm_family = s.vm_family;
        r.features.vm_shape_key = shape_key(r.shape);
        r.features.vm_category = s.vm_category;
        r.features.has_ssd = s.has_ssd;
        r.features.priority = s.priority;
        r.features.provisioning_model = s.spot;
        return r;
    };

    Trace trace;
    trace.reserve(cfg.num_vms + 1024);
    if (cfg.prefill && cfg.prefill_window_s > 0) {
        double t = -static_cast<double>(cfg.prefill_window_s);
        while (true) {
            t += gap(rng);
            if (t >= 0.0) break;
            TraceRecord r = draw(static_cast<SimTime>(std::floor(t)));
            if (r.exit_time() > 0) trace.push_back(std::move(r));
        }
    }
    double t = 0.0;
    for (std::size_t i = 0; i < cfg.num_vms; ++i) {
        trace.push_back(draw(static_cast<SimTime>(std::floor(t))));
        t += gap(rng);
    }
    for (std::size_t i = 0; i < trace.size(); ++i) trace[i].id = VmId{i};
    return trace;
}

// --- JSON ------------------------------------------------------------------

namespace {

void to_json(nlohmann::json& j, const ResourceVec& r) { j = {{"cpu_milli", r.cpu_milli}, {"mem_mib", r.mem_mib}}; }
void from_json(const nlohmann::json& j, ResourceVec& r) {
    j.at("cpu_milli").get_to(r.cpu_milli);
    j.at("mem_mib").get_to(r.mem_mib);
}

}  // namespace

void to_json(nlohmann::json& j, const GeneratorConfig& cfg) {
    nlohmann::json strata = nlohmann::json::array();
    for (const StratumSpec& s : cfg.strata) {
        nlohmann::json life = nlohmann::json::array();
        for (const auto& c : s.lifetime) {
            life.push_back({{"weight", c.weight}, {"mu_log10_h", c.mu_log10_h}, {"sigma_log10_h", c.sigma_log10_h}});
        }
        nlohmann::json shapes = nlohmann::json::array();
        for (const auto& sh : s.shapes) {
            nlohmann::json shape;
            to_json(shape, sh.shape);
            shape["weight"] = sh.weight;
            shapes.push_back(shape);
        }
        strata.push_back({{"name", s.name},
                          {"weight", s.weight},
                          {"lifetime", life},
                          {"shapes", shapes},
                          {"vm_family", s.vm_family},
                          {"vm_category", s.vm_category},
                          {"priority", s.priority},
                          {"has_ssd", s.has_ssd},
                          {"spot", s.spot}});
    }
    nlohmann::json cap;
    to_json(cap, cfg.host_capacity);
    j = {{"num_vms", cfg.num_vms},
         {"hosts", cfg.hosts},
         {"host_capacity", cap},
         {"target_util", cfg.target_util},
         {"arrival_rate_per_h", cfg.arrival_rate_per_h},
         {"prefill", cfg.prefill},
         {"prefill_window_s", cfg.prefill_window_s},
         {"min_lifetime_s", cfg.min_lifetime_s},
         {"max_lifetime_s", cfg.max_lifetime_s},
         {"zones", cfg.zones},
         {"strata", strata},
         {"seed", cfg.seed}};
}

void from_json(const nlohmann::json& j, GeneratorConfig& cfg) {
    auto opt = [&j](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    opt("num_vms", cfg.num_vms);
    opt("hosts", cfg.hosts);
    if (j.contains("host_capacity")) from_json(j.at("host_capacity"), cfg.host_capacity);
    opt("target_util", cfg.target_util);
    opt("arrival_rate_per_h", cfg.arrival_rate_per_h);
    opt("prefill", cfg.prefill);
    opt("prefill_window_s", cfg.prefill_window_s);
    opt("min_lifetime_s", cfg.min_lifetime_s);
    opt("max_lifetime_s", cfg.max_lifetime_s);
    opt("zones", cfg.zones);
    opt("seed", cfg.seed);
    if (j.contains("strata")) {
        cfg.strata.clear();
        for (const auto& js : j.at("strata")) {
            StratumSpec s;
            js.at("name").get_to(s.name);
            js.at("weight").get_to(s.weight);
            for (const auto& jc : js.at("lifetime")) {
                s.lifetime.push_back({jc.at("weight").get<double>(), jc.at("mu_log10_h").get<double>(),
                                      jc.at("sigma_log10_h").get<double>()});
            }
            for (const auto& jsh : js.at("shapes")) {
                ShapeWeight sh;
                from_json(jsh, sh.shape);
                jsh.at("weight").get_to(sh.weight);
                s.shapes.push_back(sh);
            }
            s.vm_family = js.value("vm_family", "");
            s.vm_category = js.value("vm_category", "");
            s.priority = js.value("priority", "");
            s.has_ssd = js.value("has_ssd", false);
            s.spot = js.value("spot", false);
            cfg.strata.push_back(std::move(s));
        }
    }
}

}  // namespace lava

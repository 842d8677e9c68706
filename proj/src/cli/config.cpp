#include "lava/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "lava/workload/generator_json.hpp"

namespace lava {

namespace pt = boost::property_tree;

void SweepConfig::validate() const {
    if (accuracies.empty()) throw ConfigError("sweep needs at least one accuracy");
    for (double a : accuracies) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("accuracy " + std::to_string(a) + " outside [0, 1]");
    }
    if (seeds == 0) throw ConfigError("sweep needs at least one seed");
    if (algorithms.empty()) throw ConfigError("sweep needs at least one algorithm");
}

std::string_view to_string(NilasPosition p) {
    return p == NilasPosition::Highest ? "highest" : "above-binpacking";
}

NilasPosition parse_nilas_position(std::string_view s) {
    if (s == "above-binpacking") return NilasPosition::AboveBinPacking;
    if (s == "highest") return NilasPosition::Highest;
    throw ConfigError("unknown nilas position '" + std::string(s) + "'");
}

namespace {

double to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("not a number: '" + std::string(s) + "'");
    return v;
}

std::int64_t to_int64(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("not an integer: '" + std::string(s) + "'");
    return v;
}

std::size_t to_size(std::string_view s) {
    const std::int64_t v = to_int64(s);
    if (v < 0) throw ConfigError("negative count: '" + std::string(s) + "'");
    return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <typename F>
void for_each_item(std::string_view s, F&& f) {
    while (!s.empty()) {
        const std::size_t comma = s.find(',');
        const std::string_view item = trim(s.substr(0, comma));
        if (!item.empty()) f(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
}

using Setter = std::function<void(const std::string&)>;
using Section = std::map<std::string, Setter>;

std::map<std::string, Section> sections(RunConfig& c) {
    std::map<std::string, Section> s;
    SimConfig& sim = c.sim;
    s["sim"] = {
        {"hosts", [&](const std::string& v) { sim.hosts = to_size(v); }},
        {"host_cpu_cores", [&](const std::string& v) { sim.host_capacity.cpu_milli = to_int64(v) * 1000; }},
        {"host_mem_gib", [&](const std::string& v) { sim.host_capacity.mem_mib = to_int64(v) * 1024; }},
        {"warm_up", [&](const std::string& v) { sim.warm_up = to_bool(v); }},
        {"warm_up_s", [&](const std::string& v) { sim.warm_up_s = to_int64(v); }},
        {"sample_interval_s", [&](const std::string& v) { sim.sample_interval_s = to_int64(v); }},
        {"cache_refresh_s", [&](const std::string& v) { sim.cache_refresh_s = to_int64(v); }},
        {"stranding_interval_s", [&](const std::string& v) { sim.stranding_interval_s = to_int64(v); }},
        {"stranding_seed", [&](const std::string& v) { sim.stranding_seed = static_cast<std::uint64_t>(to_int64(v)); }},
        {"check_invariants", [&](const std::string& v) { sim.check_invariants = to_bool(v); }},
        {"record_placements", [&](const std::string& v) { sim.record_placements = to_bool(v); }},
        {"algorithm", [&](const std::string& v) { sim.algorithm = parse_algorithm(v); }},
    };
    auto buckets = [](NilasConfig& n) {
        return [&n](const std::string& v) {
            n.bucket_boundaries_s.clear();
            for_each_item(v, [&](std::string_view item) { n.bucket_boundaries_s.push_back(to_int64(item)); });
        };
    };
    s["nilas"] = {
        {"bucket_boundaries_s", buckets(sim.sched.nilas)},
        {"position", [&](const std::string& v) { sim.sched.nilas.position = parse_nilas_position(v); }},
    };
    s["lava"] = {
        {"recycle_threshold", [&](const std::string& v) { sim.sched.lava.recycle_threshold = to_double(v); }},
        {"deadline_factor", [&](const std::string& v) { sim.sched.lava.deadline_factor = to_double(v); }},
        {"bucket_boundaries_s", buckets(sim.sched.lava.nilas)},
    };
    s["la_binary"] = {
        {"threshold_s", [&](const std::string& v) { sim.sched.la_binary_threshold_s = to_double(v); }},
    };
    DefragConfig& d = sim.defrag;
    s["defrag"] = {
        {"enabled", [&](const std::string& v) { d.enabled = to_bool(v); }},
        {"empty_host_trigger", [&](const std::string& v) { d.empty_host_trigger = to_double(v); }},
        {"candidates_per_round", [&](const std::string& v) { d.candidates_per_round = to_size(v); }},
        {"ordering", [&](const std::string& v) { d.ordering = parse_migration_order(v); }},
        {"max_concurrent", [&](const std::string& v) { d.max_concurrent = to_size(v); }},
        {"migration_duration_s", [&](const std::string& v) { d.migration_duration_s = to_int64(v); }},
        {"check_interval_s", [&](const std::string& v) { d.check_interval_s = to_int64(v); }},
    };
    NoisyOracleConfig& n = c.predictor.noisy;
    s["predictor"] = {
        {"spec", [&](const std::string& v) { c.predictor.spec = v; }},
        {"accuracy", [&](const std::string& v) { n.accuracy = to_double(v); }},
        {"sigma_correct", [&](const std::string& v) { n.sigma_correct = to_double(v); }},
        {"sigma_wrong", [&](const std::string& v) { n.sigma_wrong = to_double(v); }},
        {"cap_s", [&](const std::string& v) { n.cap_s = to_double(v); }},
        {"seed", [&](const std::string& v) { n.seed = static_cast<std::uint64_t>(to_int64(v)); }},
    };
    s["empirical"] = {
        {"cap_s", [&](const std::string& v) { c.empirical.cap_s = to_int64(v); }},
        {"min_count", [&](const std::string& v) { c.empirical.min_count = to_int64(v); }},
        {"floor_s", [&](const std::string& v) { c.empirical.floor_s = to_double(v); }},
    };
    s["sweep"] = {
        {"accuracies", [&](const std::string& v) { c.sweep.accuracies = parse_number_list(v); }},
        {"seeds", [&](const std::string& v) { c.sweep.seeds = to_size(v); }},
        {"algorithms",
         [&](const std::string& v) {
             c.sweep.algorithms.clear();
             for_each_item(v, [&](std::string_view item) { c.sweep.algorithms.push_back(parse_algorithm(item)); });
         }},
    };
    TheoremConfig& t = c.theorem.base;
    s["theorem"] = {
        {"m", [&](const std::string& v) { t.m = to_size(v); }},
        {"k", [&](const std::string& v) { t.k = to_size(v); }},
        {"S", [&](const std::string& v) { t.S = to_double(v); }},
        {"L", [&](const std::string& v) { t.L = to_double(v); }},
        {"lambda", [&](const std::string& v) { t.lambda = to_double(v); }},
        {"rho", [&](const std::string& v) { t.rho = to_double(v); }},
        {"epsilon", [&](const std::string& v) { t.epsilon = to_double(v); }},
        {"horizon", [&](const std::string& v) { t.horizon = to_double(v); }},
        {"warmup_frac", [&](const std::string& v) { t.warmup_frac = to_double(v); }},
        {"seed", [&](const std::string& v) { t.seed = static_cast<std::uint64_t>(to_int64(v)); }},
        {"seeds", [&](const std::string& v) { c.theorem.seeds = to_size(v); }},
        {"ms",
         [&](const std::string& v) {
             c.theorem.ms.clear();
             for_each_item(v, [&](std::string_view item) { c.theorem.ms.push_back(to_size(item)); });
         }},
    };
    GeneratorConfig& g = c.generator;
    s["generator"] = {
        {"num_vms", [&](const std::string& v) { g.num_vms = to_size(v); }},
        {"hosts", [&](const std::string& v) { g.hosts = to_size(v); }},
        {"host_cpu_cores", [&](const std::string& v) { g.host_capacity.cpu_milli = to_int64(v) * 1000; }},
        {"host_mem_gib", [&](const std::string& v) { g.host_capacity.mem_mib = to_int64(v) * 1024; }},
        {"target_util", [&](const std::string& v) { g.target_util = to_double(v); }},
        {"arrival_rate_per_h", [&](const std::string& v) { g.arrival_rate_per_h = to_double(v); }},
        {"prefill", [&](const std::string& v) { g.prefill = to_bool(v); }},
        {"prefill_window_s", [&](const std::string& v) { g.prefill_window_s = to_int64(v); }},
        {"min_lifetime_s", [&](const std::string& v) { g.min_lifetime_s = to_int64(v); }},
        {"max_lifetime_s", [&](const std::string& v) { g.max_lifetime_s = to_int64(v); }},
        {"seed", [&](const std::string& v) { g.seed = static_cast<std::uint64_t>(to_int64(v)); }},
    };
    return s;
}

void apply_generator_preset(GeneratorConfig& g, const pt::ptree& section) {
    const auto preset = section.get_optional<std::string>("preset");
    const auto json_path = section.get_optional<std::string>("json");
    if (preset) {
        if (*preset == "default") g = default_generator_config();
        else if (*preset == "bimodal") g = bimodal_generator_config();
        else throw ConfigError("unknown generator preset '" + *preset + "'");
    }
    if (json_path) {
        std::ifstream in(*json_path);
        if (!in) throw ConfigError("cannot open generator json '" + *json_path + "'");
        try {
            from_json(nlohmann::json::parse(in), g);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("bad generator json '" + *json_path + "': " + e.what());
        }
    }
}

}  // namespace

std::vector<double> parse_number_list(std::string_view s) {
    std::vector<double> out;
    for_each_item(s, [&](std::string_view item) { out.push_back(to_double(item)); });
    return out;
}

void apply_ini(RunConfig& cfg, std::istream& is) {
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    std::map<std::string, Section> known = sections(cfg);
    for (const auto& [name, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("key '" + name + "' outside any section");
        const auto it = known.find(name);
        if (it == known.end()) throw ConfigError("unknown config section [" + name + "]");
        // Presets replace the whole generator config, so they are applied before any scalar override.
        if (name == "generator") apply_generator_preset(cfg.generator, body);
        for (const auto& [key, value] : body) {
            if (name == "generator" && (key == "preset" || key == "json")) continue;
            const auto setter = it->second.find(key);
            if (setter == it->second.end()) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
            try {
                setter->second(value.data());
            } catch (const ConfigError& e) {
                throw ConfigError("[" + name + "] " + key + ": " + e.what());
            } catch (const InvalidArgument& e) {
                throw ConfigError("[" + name + "] " + key + ": " + e.what());
            }
        }
    }
    cfg.sim.validate();
    cfg.sweep.validate();
    cfg.theorem.base.validate();
    cfg.generator.validate();
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    apply_ini(cfg, in);
    return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    const SimConfig& s = c.sim;
    json j;
    j["sim"] = {
        {"hosts", s.hosts},
        {"host_cpu_milli", s.host_capacity.cpu_milli},
        {"host_mem_mib", s.host_capacity.mem_mib},
        {"warm_up", s.warm_up},
        {"warm_up_s", s.warm_up_s},
        {"sample_interval_s", s.sample_interval_s},
        {"cache_refresh_s", s.cache_refresh_s},
        {"stranding_interval_s", s.stranding_interval_s},
        {"stranding_seed", s.stranding_seed},
        {"check_invariants", s.check_invariants},
        {"record_placements", s.record_placements},
        {"algorithm", to_string(s.algorithm)},
    };
    j["nilas"] = {{"bucket_boundaries_s", s.sched.nilas.bucket_boundaries_s},
                  {"position", to_string(s.sched.nilas.position)}};
    j["lava"] = {{"recycle_threshold", s.sched.lava.recycle_threshold},
                 {"deadline_factor", s.sched.lava.deadline_factor},
                 {"bucket_boundaries_s", s.sched.lava.nilas.bucket_boundaries_s}};
    j["la_binary"] = {{"threshold_s", s.sched.la_binary_threshold_s}};
    j["defrag"] = {
        {"enabled", s.defrag.enabled},
        {"empty_host_trigger", s.defrag.empty_host_trigger},
        {"candidates_per_round", s.defrag.candidates_per_round},
        {"ordering", to_string(s.defrag.ordering)},
        {"max_concurrent", s.defrag.max_concurrent},
        {"migration_duration_s", s.defrag.migration_duration_s},
        {"check_interval_s", s.defrag.check_interval_s},
    };
    const NoisyOracleConfig& n = c.predictor.noisy;
    j["predictor"] = {{"spec", c.predictor.spec},        {"accuracy", n.accuracy},
                      {"sigma_correct", n.sigma_correct}, {"sigma_wrong", n.sigma_wrong},
                      {"cap_s", n.cap_s},                 {"seed", n.seed}};
    j["empirical"] = {{"cap_s", c.empirical.cap_s},
                      {"min_count", c.empirical.min_count},
                      {"floor_s", c.empirical.floor_s}};
    json algos = json::array();
    for (Algorithm a : c.sweep.algorithms) algos.push_back(to_string(a));
    j["sweep"] = {{"accuracies", c.sweep.accuracies}, {"seeds", c.sweep.seeds}, {"algorithms", algos}};
    const TheoremConfig& t = c.theorem.base;
    j["theorem"] = {{"m", t.m},           {"k", t.k},           {"S", t.S},
                    {"L", t.L},           {"lambda", t.lambda}, {"rho", t.rho},
                    {"epsilon", t.epsilon}, {"horizon", t.horizon}, {"warmup_frac", t.warmup_frac},
                    {"seed", t.seed},     {"ms", c.theorem.ms}, {"seeds", c.theorem.seeds}};
    json g;
    to_json(g, c.generator);
    j["generator"] = g;
    return j;
}

std::unique_ptr<LifetimeModel> make_predictor(const PredictorOptions& opts) {
    const std::string_view spec = opts.spec;
    if (spec == "oracle") return std::make_unique<OracleModel>();
    if (spec.starts_with("noisy:")) {
        NoisyOracleConfig cfg = opts.noisy;
        cfg.accuracy = to_double(spec.substr(6));
        try {
            return std::make_unique<NoisyOracleModel>(cfg);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("predictor: ") + e.what());
        }
    }
    if (spec.starts_with("empirical:")) {
        const std::string path(spec.substr(10));
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open model file '" + path + "'");
        return std::make_unique<EmpiricalModel>(EmpiricalModel::load(in));
    }
    throw ConfigError("unknown predictor '" + opts.spec + "' (oracle | noisy:<acc> | empirical:<file>)");
}

}  // namespace lava

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "lava/predict/empirical.hpp"
#include "lava/predict/model.hpp"
#include "lava/sim/engine.hpp"
#include "lava/sim/theorem.hpp"
#include "lava/workload/generator.hpp"

namespace lava {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct PredictorOptions {
    /// oracle | noisy:<accuracy> | empirical:<model file>
    std::string spec = "oracle";
    NoisyOracleConfig noisy;
};

struct SweepConfig {
    std::vector<double> accuracies = {0.5, 0.7, 0.9, 1.0};
    std::size_t seeds = 5;
    std::vector<Algorithm> algorithms = {Algorithm::Nilas, Algorithm::Lava};

    void validate() const;
};

struct TheoremSweepConfig {
    TheoremConfig base;
    std::vector<std::size_t> ms = {20, 40, 80};
    std::size_t seeds = 20;
};

/// Everything a command needs; every section of the INI file maps onto one
/// member and every key defaults to the library default.
struct RunConfig {
    SimConfig sim;
    PredictorOptions predictor;
    EmpiricalConfig empirical;
    SweepConfig sweep;
    TheoremSweepConfig theorem;
    GeneratorConfig generator = default_generator_config();
};

/// INI sections: [sim] [nilas] [lava] [la_binary] [defrag] [predictor]
/// [empirical] [sweep] [theorem] [generator]. Unknown sections or keys are
/// rejected.
void apply_ini(RunConfig& cfg, std::istream& is);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

std::string_view to_string(NilasPosition p);
/// "above-binpacking" or "highest".
NilasPosition parse_nilas_position(std::string_view s);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(std::string_view s);

/// Builds the model named by `opts.spec`. noisy:<acc> overrides the accuracy
/// of `opts.noisy`; empirical:<path> loads a saved model.
std::unique_ptr<LifetimeModel> make_predictor(const PredictorOptions& opts);

}  // namespace lava

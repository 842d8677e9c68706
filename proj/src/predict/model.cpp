#include "lava/predict/model.hpp"

#include "lava/core/hash.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace lava {

double predict_oracle(const VmRecord& vm, SimTime now) {
    return static_cast<double>(std::max<SimTime>(vm.true_exit_time - now, 0));
}

double OracleModel::predict_remaining(const VmRecord& vm, double uptime_s) const {
    return std::max(static_cast<double>(vm.true_lifetime()) - uptime_s, 0.0);
}

void NoisyOracleConfig::validate() const {
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw InvalidArgument("accuracy must be in [0, 1]");
    if (!(sigma_correct >= 0.0) || !(sigma_wrong >= 0.0)) throw InvalidArgument("sigma must be >= 0");
    if (!(cap_s > 0.0)) throw InvalidArgument("cap must be positive");
}

NoisyOracleModel::NoisyOracleModel(NoisyOracleConfig cfg) : cfg_(cfg) { cfg_.validate(); }

bool NoisyOracleModel::predicted_correctly(VmId id) const {
    std::mt19937_64 rng(mix64(cfg_.seed ^ mix64(id.value)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < cfg_.accuracy;
}

double NoisyOracleModel::predicted_total(const VmRecord& vm) const {
    std::mt19937_64 rng(mix64(cfg_.seed ^ mix64(vm.id.value)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool correct = u(rng) < cfg_.accuracy;
    const double sigma = correct ? cfg_.sigma_correct : cfg_.sigma_wrong;
    const double truth = static_cast<double>(vm.true_lifetime());
    double total = truth;
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        total = std::pow(10.0, std::log10(truth) + noise(rng));
    }
    return std::clamp(total, 0.0, cfg_.cap_s);
}

double NoisyOracleModel::predict_remaining(const VmRecord& vm, double uptime_s) const {
    return std::max(predicted_total(vm) - uptime_s, 0.0);
}

std::string NoisyOracleModel::describe() const {
    std::ostringstream os;
    os << "noisy:" << cfg_.accuracy;
    return os.str();
}

double predict_noisy(const VmRecord& vm, SimTime now, const NoisyOracleModel& model) {
    return model.predict_remaining(vm, vm.uptime(now));
}

}  // namespace lava

#pragma once

#include <cstdint>
#include <string>

#include "lava/core/pool.hpp"

namespace lava {

/// Lifetime predictor contract. Implementations must be immutable after
/// construction so one instance can serve concurrent simulations.
class LifetimeModel {
public:
    virtual ~LifetimeModel() = default;

    /// Expected remaining lifetime in seconds of `vm` given it has been up for
    /// `uptime_s`. Always finite and >= 0.
    virtual double predict_remaining(const VmRecord& vm, double uptime_s) const = 0;

    virtual std::string describe() const = 0;
};

/// max(true_exit_time - now, 0).
double predict_oracle(const VmRecord& vm, SimTime now);

class OracleModel final : public LifetimeModel {
public:
    double predict_remaining(const VmRecord& vm, double uptime_s) const override;
    std::string describe() const override { return "oracle"; }
};

struct NoisyOracleConfig {
    double accuracy = 1.0;
    double sigma_correct = 0.001;  // log10 domain
    double sigma_wrong = 3.0;      // log10 domain
    double cap_s = 14.0 * 86400.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Oracle whose total-lifetime label is perturbed once per VM in the log10
/// domain. The draw is a pure function of (seed, vm id), so repeated queries
/// for the same VM see the same predicted total.
class NoisyOracleModel final : public LifetimeModel {
public:
    explicit NoisyOracleModel(NoisyOracleConfig cfg);

    double predict_remaining(const VmRecord& vm, double uptime_s) const override;
    std::string describe() const override;

    /// Perturbed total lifetime, clamped to [0, cap_s].
    double predicted_total(const VmRecord& vm) const;
    /// Whether this VM landed in the correctly-predicted bucket.
    bool predicted_correctly(VmId id) const;

    const NoisyOracleConfig& config() const { return cfg_; }

private:
    NoisyOracleConfig cfg_;
};

/// Convenience wrapper matching the free-function form: remaining lifetime at `now`.
double predict_noisy(const VmRecord& vm, SimTime now, const NoisyOracleModel& model);

}  // namespace lava

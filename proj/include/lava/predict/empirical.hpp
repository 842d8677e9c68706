#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lava/predict/model.hpp"

namespace lava {

/// Empirical lifetime distribution of one stratum, stored as sorted distinct
/// (lifetime, count) points with suffix aggregates. The survival function is
/// the right-continuous step S(t) = P(T > t).
class SurvivalCurve {
public:
    SurvivalCurve() = default;
    /// Points need not be sorted or distinct; counts must be positive.
    explicit SurvivalCurve(std::vector<std::pair<SimTime, std::int64_t>> points);

    double survival(double t) const;
    /// E(T - t | T > t); requires survival(t) > 0.
    double expected_remaining(double uptime_s) const;
    /// E(T | T > t) = uptime + E(T_r | T_u); requires survival(t) > 0.
    double expected_total(double uptime_s) const;
    /// Number of observations with lifetime > t.
    std::int64_t survivors(double t) const;

    std::int64_t total_count() const { return suffix_count_.empty() ? 0 : suffix_count_.front(); }
    SimTime max_lifetime() const { return points_.empty() ? 0 : points_.back().first; }
    const std::vector<std::pair<SimTime, std::int64_t>>& points() const { return points_; }

    void merge(const SurvivalCurve& other);

private:
    void rebuild();
    std::size_t first_survivor(double t) const;

    std::vector<std::pair<SimTime, std::int64_t>> points_;
    std::vector<std::int64_t> suffix_count_;
    std::vector<std::int64_t> suffix_sum_;
};

struct TrainingRow {
    FeatureVec features;
    SimTime lifetime_s = 0;
};

struct EmpiricalConfig {
    SimTime cap_s = 168 * 3600;
    std::int64_t min_count = 10;
    double floor_s = 3600.0;
};

class EmptyTrainingSet : public Error {
public:
    using Error::Error;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

/// Stratified empirical survival model. Reprediction answers E(T_r | T_u)
/// from the stratum's step survival function; unseen strata fall back to the
/// pooled curve.
class EmpiricalModel final : public LifetimeModel {
public:
    static EmpiricalModel train(std::span<const TrainingRow> rows, EmpiricalConfig cfg = {});

    double predict_remaining(const VmRecord& vm, double uptime_s) const override;
    std::string describe() const override { return "empirical"; }

    double predict_remaining(const FeatureVec& features, double uptime_s) const;

    /// Replaces rare categorical values with "Other".
    FeatureVec collapse(const FeatureVec& f) const;
    /// Curve for the collapsed features, or the global curve if unseen.
    const SurvivalCurve& curve_for(const FeatureVec& f) const;
    const SurvivalCurve& global() const { return global_; }
    const std::map<std::string, SurvivalCurve>& strata() const { return strata_; }
    const EmpiricalConfig& config() const { return cfg_; }

    void save(std::ostream& os) const;
    static EmpiricalModel load(std::istream& is);

    static constexpr const char* kOther = "Other";
    static constexpr int kFormatVersion = 1;

private:
    enum Field { kZone, kFamily, kShape, kCategory, kPriority, kFieldCount };
    static const std::array<const char*, kFieldCount> kFieldNames;

    void rebuild_global();

    EmpiricalConfig cfg_;
    std::array<std::set<std::string>, kFieldCount> vocab_;
    std::map<std::string, SurvivalCurve> strata_;
    SurvivalCurve global_;
};

}  // namespace lava

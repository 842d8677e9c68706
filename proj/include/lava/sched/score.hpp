#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "lava/core/pool.hpp"

namespace lava {

/// Lexicographically compared score; lower is better. Every policy emits
/// vectors of one fixed length so comparison is a total order.
struct ScoreVector {
    std::vector<std::int64_t> parts;

    ScoreVector() = default;
    ScoreVector(std::initializer_list<std::int64_t> init) : parts(init) {}

    ScoreVector& push(std::int64_t v) {
        parts.push_back(v);
        return *this;
    }

    friend std::strong_ordering operator<=>(const ScoreVector& a, const ScoreVector& b) {
        return a.parts <=> b.parts;
    }
    friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

    friend std::ostream& operator<<(std::ostream& os, const ScoreVector& s) {
        os << '[';
        for (std::size_t i = 0; i < s.parts.size(); ++i) os << (i ? ", " : "") << s.parts[i];
        return os << ']';
    }
};

/// Fixed-point scale of the best-fit component (2^40 = a completely free host).
inline constexpr std::int64_t kFitScale = std::int64_t{1} << 40;

/// max over dimensions of (capacity - used - shape) / capacity, in units of
/// 1/kFitScale, rounded down. Lower means a tighter fit.
std::int64_t best_fit_residual(const HostRecord& host, const ResourceVec& vm_shape);

/// {host is empty ? 1 : 0, best_fit_residual}: tight non-empty hosts first,
/// empty hosts only after every feasible non-empty host.
ScoreVector score_best_fit(const HostRecord& host, const ResourceVec& vm_shape);

}  // namespace lava

#pragma once

#include <cstdint>
#include <ostream>

namespace lava {

/// Two-dimensional resource quantity held in fixed point: milli-cores and MiB.
/// All arithmetic is exact, so conservation checks compare bit-for-bit.
struct ResourceVec {
    std::int64_t cpu_milli = 0;
    std::int64_t mem_mib = 0;

    constexpr ResourceVec() = default;
    constexpr ResourceVec(std::int64_t cpu_milli_, std::int64_t mem_mib_)
        : cpu_milli(cpu_milli_), mem_mib(mem_mib_) {}

    /// Whole cores and GiB.
    static constexpr ResourceVec cores_gib(std::int64_t cores, std::int64_t gib) {
        return {cores * 1000, gib * 1024};
    }

    constexpr double cores() const { return static_cast<double>(cpu_milli) / 1000.0; }
    constexpr double gib() const { return static_cast<double>(mem_mib) / 1024.0; }

    constexpr bool is_zero() const { return cpu_milli == 0 && mem_mib == 0; }
    constexpr bool non_negative() const { return cpu_milli >= 0 && mem_mib >= 0; }

    constexpr ResourceVec& operator+=(const ResourceVec& o) {
        cpu_milli += o.cpu_milli;
        mem_mib += o.mem_mib;
        return *this;
    }
    constexpr ResourceVec& operator-=(const ResourceVec& o) {
        cpu_milli -= o.cpu_milli;
        mem_mib -= o.mem_mib;
        return *this;
    }

    friend constexpr ResourceVec operator+(ResourceVec a, const ResourceVec& b) { return a += b; }
    friend constexpr ResourceVec operator-(ResourceVec a, const ResourceVec& b) { return a -= b; }
    friend constexpr bool operator==(const ResourceVec&, const ResourceVec&) = default;

    friend std::ostream& operator<<(std::ostream& os, const ResourceVec& r) {
        return os << '(' << r.cores() << " cores, " << r.gib() << " GiB)";
    }
};

/// Componentwise partial order: a fits within b in every dimension.
constexpr bool fits_within(const ResourceVec& a, const ResourceVec& b) {
    return a.cpu_milli <= b.cpu_milli && a.mem_mib <= b.mem_mib;
}

}  // namespace lava

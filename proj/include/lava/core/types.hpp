#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lava {

/// Simulation time in whole seconds. Trace times may be negative (VMs created
/// before the measurement origin).
using SimTime = std::int64_t;

inline constexpr SimTime kMinute = 60;
inline constexpr SimTime kHour = 3600;
inline constexpr SimTime kDay = 24 * kHour;

/// Strongly typed identifier; Tag distinguishes VM ids from host ids.
template <typename Tag>
struct Id {
    std::uint64_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint64_t v) : value(v) {}

    friend constexpr auto operator<=>(const Id&, const Id&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

using VmId = Id<struct VmTag>;
using HostId = Id<struct HostTag>;

enum class LifetimeClass : std::uint8_t { LC1 = 1, LC2 = 2, LC3 = 3, LC4 = 4 };

constexpr int to_int(LifetimeClass c) { return static_cast<int>(c); }

constexpr LifetimeClass class_from_int(int c) {
    return static_cast<LifetimeClass>(c < 1 ? 1 : (c > 4 ? 4 : c));
}

std::string to_string(LifetimeClass c);

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class UnknownVm : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace lava

template <typename Tag>
struct std::hash<lava::Id<Tag>> {
    std::size_t operator()(const lava::Id<Tag>& id) const noexcept {
        return std::hash<std::uint64_t>{}(id.value);
    }
};

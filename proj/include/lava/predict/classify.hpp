#pragma once

#include "lava/core/types.hpp"

namespace lava {

class NonPositiveInput : public Error {
public:
    using Error::Error;
};

/// |log10(pred) - log10(truth)|, both in seconds.
double log_error(double pred_s, double true_s);

enum class BinaryClass : std::uint8_t { Short, Long };

inline constexpr double kBinaryThresholdS = 2.0 * 3600.0;

/// Long iff remaining >= threshold.
constexpr BinaryClass classify_binary(double remaining_s, double threshold_s = kBinaryThresholdS) {
    return remaining_s >= threshold_s ? BinaryClass::Long : BinaryClass::Short;
}

/// Decade classes on hours: [0,1) [1,10) [10,100) [100,inf).
constexpr LifetimeClass lifetime_class(double remaining_s) {
    if (remaining_s < 3600.0) return LifetimeClass::LC1;
    if (remaining_s < 36000.0) return LifetimeClass::LC2;
    if (remaining_s < 360000.0) return LifetimeClass::LC3;
    return LifetimeClass::LC4;
}

/// Upper bound in seconds of a class: 1h, 10h, 100h, 1000h.
constexpr SimTime class_upper_bound_s(LifetimeClass c) {
    switch (c) {
        case LifetimeClass::LC1: return 3600;
        case LifetimeClass::LC2: return 36000;
        case LifetimeClass::LC3: return 360000;
        case LifetimeClass::LC4: return 3600000;
    }
    return 3600000;
}

}  // namespace lava

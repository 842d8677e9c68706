#pragma once

#include <string>

#include "lava/core/resources.hpp"

namespace lava {

/// Categorical VM descriptors available to lifetime models at creation time.
struct FeatureVec {
    std::string zone;
    std::string vm_family;
    std::string vm_shape_key;
    std::string vm_category;
    bool has_ssd = false;
    std::string priority;
    bool provisioning_model = false;  // true = spot

    friend bool operator==(const FeatureVec&, const FeatureVec&) = default;
};

/// Canonical "<cores>x<gib>" key derived from a shape, e.g. "4x16".
std::string shape_key(const ResourceVec& shape);

/// Stable '|'-joined key of all fields; used to name strata.
std::string feature_key(const FeatureVec& f);

}  // namespace lava

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lava/core/pool.hpp"

namespace lava {

struct TraceRecord {
    VmId id;
    SimTime create_time = 0;
    SimTime lifetime_s = 0;
    ResourceVec shape;
    /// vm_shape_key is always derived from `shape`.
    FeatureVec features;

    SimTime exit_time() const { return create_time + lifetime_s; }
    VmRecord to_vm() const;
};

using Trace = std::vector<TraceRecord>;

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    using Error::Error;
};

inline constexpr const char* kTraceMagic = "#lava-trace v1";

/// Parses the tab-separated trace format; output is sorted by
/// (create_time, vm_id).
Trace parse_trace(std::istream& is);
Trace load_trace(const std::string& path);

void serialize_trace(const Trace& trace, std::ostream& os);
void save_trace(const Trace& trace, const std::string& path);

/// Sorts in place by (create_time, vm_id).
void sort_trace(Trace& trace);

/// Deterministic split on a hash of the vm id; train_frac in (0, 1).
std::pair<Trace, Trace> split_trace(const Trace& trace, double train_frac);

/// Fraction of VMs with lifetime < 1 h, and share of core-seconds consumed
/// by VMs living >= 1 h. Records with create_time < 0 are excluded.
struct SkewStats {
    std::size_t vms = 0;
    double short_vm_fraction = 0.0;
    double long_core_hour_share = 0.0;
};
SkewStats skew_stats(const Trace& trace);

}  // namespace lava

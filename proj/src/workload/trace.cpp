#include "lava/workload/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "lava/core/hash.hpp"

namespace lava {

namespace {

constexpr const char* kColumns[] = {"vm_id",  "create_time_s", "lifetime_s", "cpu_milli",
                                    "mem_mib", "zone",          "vm_family",  "vm_category",
                                    "has_ssd", "priority",      "provisioning_model"};
constexpr std::size_t kNumColumns = std::size(kColumns);

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

template <typename T>
T parse_int(std::string_view field, std::size_t line, const char* column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(line, std::string("bad integer in column ") + column + ": '" + std::string(field) + "'");
    }
    return value;
}

bool parse_bool(std::string_view field, std::size_t line, const char* column) {
    if (field == "1") return true;
    if (field == "0") return false;
    throw ParseError(line, std::string("column ") + column + " must be 0 or 1");
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

VmRecord TraceRecord::to_vm() const {
    VmRecord vm;
    vm.id = id;
    vm.shape = shape;
    vm.features = features;
    vm.create_time = create_time;
    vm.true_exit_time = exit_time();
    return vm;
}

void sort_trace(Trace& trace) {
    std::sort(trace.begin(), trace.end(), [](const TraceRecord& a, const TraceRecord& b) {
        return a.create_time != b.create_time ? a.create_time < b.create_time : a.id < b.id;
    });
}

Trace parse_trace(std::istream& is) {
    Trace trace;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != kTraceMagic) throw ParseError(lineno, "missing '" + std::string(kTraceMagic) + "' header");
            continue;
        }
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_tabs(line);
        if (!header) {
            header = true;
            if (f.size() != kNumColumns || !std::equal(f.begin(), f.end(), std::begin(kColumns))) {
                throw ParseError(lineno, "unexpected column header");
            }
            continue;
        }
        if (f.size() != kNumColumns) {
            throw ParseError(lineno, "expected " + std::to_string(kNumColumns) + " fields, got " +
                                         std::to_string(f.size()));
        }
        TraceRecord r;
        r.id = VmId{parse_int<std::uint64_t>(f[0], lineno, kColumns[0])};
        r.create_time = parse_int<SimTime>(f[1], lineno, kColumns[1]);
        r.lifetime_s = parse_int<SimTime>(f[2], lineno, kColumns[2]);
        r.shape.cpu_milli = parse_int<std::int64_t>(f[3], lineno, kColumns[3]);
        r.shape.mem_mib = parse_int<std::int64_t>(f[4], lineno, kColumns[4]);
        if (r.lifetime_s <= 0) throw ParseError(lineno, "lifetime_s must be positive");
        if (r.shape.cpu_milli <= 0 || r.shape.mem_mib <= 0) throw ParseError(lineno, "shape must be positive");
        r.features.zone = f[5];
        r.features.vm_family = f[6];
        r.features.vm_category = f[7];
        r.features.has_ssd = parse_bool(f[8], lineno, kColumns[8]);
        r.features.priority = f[9];
        r.features.provisioning_model = parse_bool(f[10], lineno, kColumns[10]);
        r.features.vm_shape_key = shape_key(r.shape);
        if (!seen.insert(r.id.value).second) {
            throw DuplicateId("line " + std::to_string(lineno) + ": duplicate vm_id " + std::to_string(r.id.value));
        }
        trace.push_back(std::move(r));
    }
    if (lineno == 0) throw ParseError(1, "empty input");
    if (!header) throw ParseError(lineno, "missing column header");
    sort_trace(trace);
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file '" + path + "'");
    return parse_trace(in);
}

void serialize_trace(const Trace& trace, std::ostream& os) {
    os << kTraceMagic << '\n';
    for (std::size_t i = 0; i < kNumColumns; ++i) os << (i ? "\t" : "") << kColumns[i];
    os << '\n';
    for (const TraceRecord& r : trace) {
        os << r.id.value << '\t' << r.create_time << '\t' << r.lifetime_s << '\t' << r.shape.cpu_milli << '\t'
           << r.shape.mem_mib << '\t' << r.features.zone << '\t' << r.features.vm_family << '\t'
           << r.features.vm_category << '\t' << (r.features.has_ssd ? 1 : 0) << '\t' << r.features.priority << '\t'
           << (r.features.provisioning_model ? 1 : 0) << '\n';
    }
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trace file '" + path + "'");
    serialize_trace(trace, out);
}

std::pair<Trace, Trace> split_trace(const Trace& trace, double train_frac) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) throw InvalidArgument("train_frac must be in (0, 1)");
    std::pair<Trace, Trace> out;
    for (const TraceRecord& r : trace) {
        const double u = static_cast<double>(mix64(r.id.value) >> 11) * 0x1.0p-53;
        (u < train_frac ? out.first : out.second).push_back(r);
    }
    return out;
}

SkewStats skew_stats(const Trace& trace) {
    SkewStats s;
    std::size_t short_vms = 0;
    double long_core_s = 0.0;
    double total_core_s = 0.0;
    for (const TraceRecord& r : trace) {
        if (r.create_time < 0) continue;
        ++s.vms;
        const double core_s = r.shape.cores() * static_cast<double>(r.lifetime_s);
        total_core_s += core_s;
        if (r.lifetime_s < kHour) {
            ++short_vms;
        } else {
            long_core_s += core_s;
        }
    }
    if (s.vms > 0) s.short_vm_fraction = static_cast<double>(short_vms) / static_cast<double>(s.vms);
    if (total_core_s > 0.0) s.long_core_hour_share = long_core_s / total_core_s;
    return s;
}

}  // namespace lava

#include "lava/predict/empirical.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lava {

std::string shape_key(const ResourceVec& shape) {
    std::ostringstream os;
    os << shape.cores() << 'x' << shape.gib();
    return os.str();
}

std::string feature_key(const FeatureVec& f) {
    std::string key;
    key.reserve(64);
    key += f.zone;
    key += '|';
    key += f.vm_family;
    key += '|';
    key += f.vm_shape_key;
    key += '|';
    key += f.vm_category;
    key += '|';
    key += f.has_ssd ? '1' : '0';
    key += '|';
    key += f.priority;
    key += '|';
    key += f.provisioning_model ? '1' : '0';
    return key;
}

// --- SurvivalCurve ---------------------------------------------------------

SurvivalCurve::SurvivalCurve(std::vector<std::pair<SimTime, std::int64_t>> points)
    : points_(std::move(points)) {
    rebuild();
}

void SurvivalCurve::rebuild() {
    std::sort(points_.begin(), points_.end());
    std::vector<std::pair<SimTime, std::int64_t>> merged;
    for (const auto& [t, c] : points_) {
        if (c <= 0) throw InvalidArgument("survival curve counts must be positive");
        if (!merged.empty() && merged.back().first == t) {
            merged.back().second += c;
        } else {
            merged.emplace_back(t, c);
        }
    }
    points_ = std::move(merged);
    const std::size_t n = points_.size();
    suffix_count_.assign(n + 1, 0);
    suffix_sum_.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        suffix_count_[i] = suffix_count_[i + 1] + points_[i].second;
        suffix_sum_[i] = suffix_sum_[i + 1] + points_[i].first * points_[i].second;
    }
}

void SurvivalCurve::merge(const SurvivalCurve& other) {
    points_.insert(points_.end(), other.points_.begin(), other.points_.end());
    rebuild();
}

std::size_t SurvivalCurve::first_survivor(double t) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const auto& p) { return v < static_cast<double>(p.first); });
    return static_cast<std::size_t>(it - points_.begin());
}

std::int64_t SurvivalCurve::survivors(double t) const {
    if (points_.empty()) return 0;
    return suffix_count_[first_survivor(t)];
}

double SurvivalCurve::survival(double t) const {
    if (points_.empty()) return 0.0;
    if (t < 0.0) return 1.0;
    return static_cast<double>(survivors(t)) / static_cast<double>(total_count());
}

double SurvivalCurve::expected_remaining(double uptime_s) const {
    const std::size_t i = first_survivor(uptime_s);
    const std::int64_t count = points_.empty() ? 0 : suffix_count_[i];
    if (count == 0) throw InvalidArgument("conditional expectation undefined where S(t) = 0");
    // Both terms are exact for integral uptimes, so the division is the only rounding.
    const double numerator = static_cast<double>(suffix_sum_[i]) - uptime_s * static_cast<double>(count);
    return numerator / static_cast<double>(count);
}

double SurvivalCurve::expected_total(double uptime_s) const {
    const std::size_t i = first_survivor(uptime_s);
    const std::int64_t count = points_.empty() ? 0 : suffix_count_[i];
    if (count == 0) throw InvalidArgument("conditional expectation undefined where S(t) = 0");
    return static_cast<double>(suffix_sum_[i]) / static_cast<double>(count);
}

// --- EmpiricalModel --------------------------------------------------------

const std::array<const char*, EmpiricalModel::kFieldCount> EmpiricalModel::kFieldNames = {
    "zone", "vm_family", "vm_shape_key", "vm_category", "priority"};

namespace {

std::array<const std::string*, 5> categorical_fields(const FeatureVec& f) {
    return {&f.zone, &f.vm_family, &f.vm_shape_key, &f.vm_category, &f.priority};
}

std::array<std::string*, 5> categorical_fields(FeatureVec& f) {
    return {&f.zone, &f.vm_family, &f.vm_shape_key, &f.vm_category, &f.priority};
}

void check_token(const std::string& v) {
    if (v.find_first_of("\t\n\r|") != std::string::npos) {
        throw InvalidArgument("feature value contains a reserved character: '" + v + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

EmpiricalModel EmpiricalModel::train(std::span<const TrainingRow> rows, EmpiricalConfig cfg) {
    if (rows.empty()) throw EmptyTrainingSet("training trace is empty");
    if (cfg.cap_s <= 0 || cfg.min_count < 0 || !(cfg.floor_s >= 0.0)) {
        throw InvalidArgument("invalid empirical model config");
    }
    EmpiricalModel model;
    model.cfg_ = cfg;

    std::array<std::map<std::string, std::int64_t>, kFieldCount> counts;
    for (const auto& row : rows) {
        if (row.lifetime_s <= 0) throw InvalidArgument("training lifetimes must be positive");
        auto fields = categorical_fields(row.features);
        for (int i = 0; i < kFieldCount; ++i) {
            check_token(*fields[i]);
            ++counts[i][*fields[i]];
        }
    }
    for (int i = 0; i < kFieldCount; ++i) {
        for (const auto& [value, n] : counts[i]) {
            if (n >= cfg.min_count) model.vocab_[i].insert(value);
        }
    }

    std::map<std::string, std::unordered_map<SimTime, std::int64_t>> buckets;
    for (const auto& row : rows) {
        const SimTime capped = std::min(row.lifetime_s, cfg.cap_s);
        ++buckets[feature_key(model.collapse(row.features))][capped];
    }
    for (auto& [key, hist] : buckets) {
        std::vector<std::pair<SimTime, std::int64_t>> pts(hist.begin(), hist.end());
        model.strata_.emplace(key, SurvivalCurve(std::move(pts)));
    }
    model.rebuild_global();
    return model;
}

void EmpiricalModel::rebuild_global() {
    std::vector<std::pair<SimTime, std::int64_t>> pooled;
    for (const auto& [key, curve] : strata_) {
        pooled.insert(pooled.end(), curve.points().begin(), curve.points().end());
    }
    global_ = SurvivalCurve(std::move(pooled));
}

FeatureVec EmpiricalModel::collapse(const FeatureVec& f) const {
    FeatureVec out = f;
    auto fields = categorical_fields(out);
    for (int i = 0; i < kFieldCount; ++i) {
        if (!vocab_[i].contains(*fields[i])) *fields[i] = kOther;
    }
    return out;
}

const SurvivalCurve& EmpiricalModel::curve_for(const FeatureVec& f) const {
    auto it = strata_.find(feature_key(collapse(f)));
    return it == strata_.end() ? global_ : it->second;
}

double EmpiricalModel::predict_remaining(const FeatureVec& features, double uptime_s) const {
    const SurvivalCurve& curve = curve_for(features);
    if (curve.survivors(uptime_s) == 0) return cfg_.floor_s;
    return std::max(curve.expected_remaining(uptime_s), 0.0);
}

double EmpiricalModel::predict_remaining(const VmRecord& vm, double uptime_s) const {
    return predict_remaining(vm.features, uptime_s);
}

void EmpiricalModel::save(std::ostream& os) const {
    os << "lava-empirical-model\t" << kFormatVersion << '\n';
    os << "cap_s\t" << cfg_.cap_s << '\n';
    os << "min_count\t" << cfg_.min_count << '\n';
    {
        std::ostringstream fs;
        fs.precision(17);
        fs << cfg_.floor_s;
        os << "floor_s\t" << fs.str() << '\n';
    }
    for (int i = 0; i < kFieldCount; ++i) {
        os << "vocab\t" << kFieldNames[i] << '\t' << vocab_[i].size();
        for (const auto& v : vocab_[i]) os << '\t' << v;
        os << '\n';
    }
    os << "strata\t" << strata_.size() << '\n';
    for (const auto& [key, curve] : strata_) {
        os << key << '\t';
        bool first = true;
        for (const auto& [t, c] : curve.points()) {
            if (!first) os << ' ';
            os << t << ':' << c;
            first = false;
        }
        os << '\n';
    }
}

EmpiricalModel EmpiricalModel::load(std::istream& is) {
    EmpiricalModel model;
    std::string line;
    int line_no = 0;
    auto next = [&](const char* what) -> std::vector<std::string> {
        if (!std::getline(is, line)) throw ModelFormatError(std::string("missing ") + what);
        ++line_no;
        return split(line, '\t');
    };
    auto fail = [&](const std::string& msg) {
        throw ModelFormatError("model line " + std::to_string(line_no) + ": " + msg);
    };
    try {
        auto header = next("header");
        if (header.size() != 2 || header[0] != "lava-empirical-model") fail("bad header");
        if (std::stoi(header[1]) != kFormatVersion) fail("unsupported version " + header[1]);
        auto cap = next("cap_s");
        if (cap.size() != 2 || cap[0] != "cap_s") fail("expected cap_s");
        model.cfg_.cap_s = std::stoll(cap[1]);
        auto mc = next("min_count");
        if (mc.size() != 2 || mc[0] != "min_count") fail("expected min_count");
        model.cfg_.min_count = std::stoll(mc[1]);
        auto fl = next("floor_s");
        if (fl.size() != 2 || fl[0] != "floor_s") fail("expected floor_s");
        model.cfg_.floor_s = std::stod(fl[1]);
        for (int i = 0; i < kFieldCount; ++i) {
            auto v = next("vocab");
            if (v.size() < 3 || v[0] != "vocab" || v[1] != kFieldNames[i]) fail("expected vocab line");
            const std::size_t n = std::stoul(v[2]);
            if (v.size() != n + 3) fail("vocab size mismatch");
            model.vocab_[i].insert(v.begin() + 3, v.end());
        }
        auto st = next("strata");
        if (st.size() != 2 || st[0] != "strata") fail("expected strata count");
        const std::size_t n = std::stoul(st[1]);
        for (std::size_t s = 0; s < n; ++s) {
            auto cols = next("stratum");
            if (cols.size() != 2) fail("stratum line needs key and points");
            std::vector<std::pair<SimTime, std::int64_t>> pts;
            std::istringstream ps(cols[1]);
            std::string tok;
            while (ps >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) fail("bad point '" + tok + "'");
                pts.emplace_back(std::stoll(tok.substr(0, colon)), std::stoll(tok.substr(colon + 1)));
            }
            if (pts.empty()) fail("empty stratum");
            model.strata_.emplace(cols[0], SurvivalCurve(std::move(pts)));
        }
    } catch (const std::logic_error& e) {  // stoi/stoll failures
        fail(e.what());
    }
    if (model.strata_.empty()) throw ModelFormatError("model has no strata");
    model.rebuild_global();
    return model;
}

}  // namespace lava

#include "support.hpp"

#include <map>
#include <mutex>

#include "lava/workload/generator.hpp"

namespace lava::test {

VmRecord vm(std::uint64_t id, ResourceVec shape, SimTime create, SimTime exit) {
    VmRecord v;
    v.id = VmId{id};
    v.shape = shape;
    v.create_time = create;
    v.true_exit_time = exit;
    v.features.zone = "zone-a";
    v.features.vm_family = "n2";
    v.features.vm_shape_key = shape_key(shape);
    v.features.vm_category = "batch";
    v.features.priority = "low";
    return v;
}

TraceRecord record(std::uint64_t id, SimTime create, SimTime lifetime, ResourceVec shape, const std::string& category) {
    TraceRecord r;
    r.id = VmId{id};
    r.create_time = create;
    r.lifetime_s = lifetime;
    r.shape = shape;
    r.features.zone = "zone-a";
    r.features.vm_family = "n2";
    r.features.vm_shape_key = shape_key(shape);
    r.features.vm_category = category;
    r.features.priority = "low";
    return r;
}

Bench::Bench(std::size_t hosts, ResourceVec cap) : pool(PoolState::homogeneous(hosts, cap)) {}

SchedContext Bench::ctx(SimTime now) {
    pool.now = now;
    return SchedContext{pool, oracle, cache, now};
}

VmRecord& Bench::stage(const Scheduler& s, VmRecord v, SimTime now) {
    VmRecord& r = pool.add_vm(std::move(v));
    SchedContext c = ctx(now);
    s.on_arrival(r, c);
    return r;
}

VmRecord& Bench::put(const Scheduler& s, VmRecord v, HostId host, SimTime now) {
    VmRecord& r = stage(s, std::move(v), now);
    pool.place(r.id, host);
    cache.invalidate(host);
    SchedContext c = ctx(now);
    s.after_place(pool.host(host), r, c);
    return r;
}

const Trace& default_trace(std::uint64_t seed) {
    static std::mutex mu;
    static std::map<std::uint64_t, Trace> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(seed);
    if (it == cache.end()) {
        GeneratorConfig g = default_generator_config();
        g.seed = seed;
        it = cache.emplace(seed, generate(g)).first;
    }
    return it->second;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace lava::test

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "lava/workload/generator.hpp"
#include "lava/workload/generator_json.hpp"
#include "lava/workload/trace.hpp"
#include "support.hpp"

namespace lava {
namespace {

const std::string kHeader =
    "#lava-trace v1\n"
    "vm_id\tcreate_time_s\tlifetime_s\tcpu_milli\tmem_mib\tzone\tvm_family\tvm_category\thas_ssd\tpriority\t"
    "provisioning_model\n";

Trace parse(const std::string& body) {
    std::istringstream in(kHeader + body);
    return parse_trace(in);
}

std::string render(const Trace& t) {
    std::ostringstream out;
    serialize_trace(t, out);
    return out.str();
}

GeneratorConfig small_config(std::uint64_t seed, std::size_t n = 2000) {
    GeneratorConfig g = default_generator_config();
    g.num_vms = n;
    g.seed = seed;
    return g;
}

TEST(ParseTrace, ThreeValidLines) {
    const Trace t = parse(
        "3\t200\t60\t2000\t8192\tzone-a\tn2\tweb\t0\tprod\t0\n"
        "1\t100\t3600\t4000\t16384\tzone-b\te2\tbatch\t1\tbatch\t1\n"
        "2\t100\t7200\t500\t2048\tzone-a\tn2\tweb\t0\tprod\t0\n");
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0].id, VmId{1});
    EXPECT_EQ(t[1].id, VmId{2});
    EXPECT_EQ(t[2].id, VmId{3});
    EXPECT_EQ(t[0].shape, ResourceVec::cores_gib(4, 16));
    EXPECT_EQ(t[0].exit_time(), 3700);
    EXPECT_TRUE(t[0].features.has_ssd);
    EXPECT_TRUE(t[0].features.provisioning_model);
    EXPECT_EQ(t[0].features.vm_shape_key, "4x16");
    EXPECT_EQ(t[1].features.vm_shape_key, "0.5x2");
    EXPECT_EQ(t[2].features.zone, "zone-a");
}

TEST(ParseTrace, UnsortedInputComesBackSorted) {
    const Trace t = parse(
        "5\t900\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n"
        "9\t-50\t600\t1000\t1024\tz\tf\tc\t0\tp\t0\n"
        "4\t900\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n"
        "7\t10\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n");
    std::vector<std::uint64_t> ids;
    for (const auto& r : t) ids.push_back(r.id.value);
    EXPECT_EQ(ids, (std::vector<std::uint64_t>{9, 7, 4, 5}));
}

TEST(ParseTrace, NegativeLifetimeReportsLine) {
    try {
        parse("1\t0\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n"
              "2\t0\t-5\t1000\t1024\tz\tf\tc\t0\tp\t0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(ParseTrace, MalformedInputs) {
    EXPECT_THROW(parse("1\t0\t0\t1000\t1024\tz\tf\tc\t0\tp\t0\n"), ParseError);
    EXPECT_THROW(parse("1\t0\t60\t0\t1024\tz\tf\tc\t0\tp\t0\n"), ParseError);
    EXPECT_THROW(parse("1\t0\t60\t1000\t1024\tz\tf\tc\t2\tp\t0\n"), ParseError);
    EXPECT_THROW(parse("1\t0\t6x\t1000\t1024\tz\tf\tc\t0\tp\t0\n"), ParseError);
    EXPECT_THROW(parse("1\t0\t60\t1000\t1024\tz\tf\tc\t0\tp\n"), ParseError);
    std::istringstream no_magic("vm_id\n");
    EXPECT_THROW(parse_trace(no_magic), ParseError);
    std::istringstream empty;
    EXPECT_THROW(parse_trace(empty), ParseError);
    std::istringstream bad_header("#lava-trace v1\nvm_id\tcreate_time_s\n");
    EXPECT_THROW(parse_trace(bad_header), ParseError);
}

TEST(ParseTrace, CommentsAndCrlfAccepted) {
    const Trace t = parse("# note\r\n1\t0\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\r\n\n");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].features.provisioning_model, false);
}

TEST(ParseTrace, DuplicateIdRejected) {
    EXPECT_THROW(parse("1\t0\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n"
                       "1\t5\t60\t1000\t1024\tz\tf\tc\t0\tp\t0\n"),
                 DuplicateId);
}

TEST(SerializeTrace, RoundTripIsExact) {
    const Trace t = generate(small_config(4));
    const std::string once = render(t);
    std::istringstream in(once);
    const Trace back = parse_trace(in);
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back[i].id, t[i].id);
        EXPECT_EQ(back[i].create_time, t[i].create_time);
        EXPECT_EQ(back[i].lifetime_s, t[i].lifetime_s);
        EXPECT_EQ(back[i].shape, t[i].shape);
        EXPECT_EQ(back[i].features, t[i].features);
    }
    EXPECT_EQ(render(back), once);
}

TEST(Generate, SameSeedByteIdentical) {
    EXPECT_EQ(render(generate(small_config(11))), render(generate(small_config(11))));
    EXPECT_NE(render(generate(small_config(11))), render(generate(small_config(12))));
}

TEST(Generate, SortedUniqueAndWithinBounds) {
    const GeneratorConfig g = small_config(3);
    const Trace t = generate(g);
    std::set<std::uint64_t> ids;
    std::size_t live = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const TraceRecord& r = t[i];
        EXPECT_TRUE(ids.insert(r.id.value).second);
        if (i > 0) {
            EXPECT_LE(t[i - 1].create_time, r.create_time);
            EXPECT_LT(t[i - 1].id, r.id);
        }
        EXPECT_GE(r.lifetime_s, g.min_lifetime_s);
        EXPECT_LE(r.lifetime_s, g.max_lifetime_s);
        EXPECT_TRUE(fits_within(r.shape, g.host_capacity));
        EXPECT_EQ(r.features.vm_shape_key, shape_key(r.shape));
        if (r.create_time < 0) {
            EXPECT_GT(r.exit_time(), 0) << "prefilled VMs must be live at t = 0";
            EXPECT_GE(r.create_time, -g.prefill_window_s);
        } else {
            ++live;
        }
    }
    EXPECT_EQ(live, g.num_vms);
}

TEST(Generate, NoPrefillMeansNoNegativeTimes) {
    GeneratorConfig g = small_config(3, 500);
    g.prefill = false;
    for (const TraceRecord& r : generate(g)) EXPECT_GE(r.create_time, 0);
}

TEST(Generate, ArrivalRateMatchesTargetUtil) {
    const GeneratorConfig g = default_generator_config();
    const double capacity_cores = static_cast<double>(g.hosts) * g.host_capacity.cores();
    EXPECT_NEAR(g.arrival_rate() * g.expected_core_hours_per_vm(), g.target_util * capacity_cores, 1e-6);
    GeneratorConfig fixed = g;
    fixed.arrival_rate_per_h = 42.0;
    EXPECT_DOUBLE_EQ(fixed.arrival_rate(), 42.0);
}

TEST(GeneratorConfig, ValidateRejects) {
    auto broken = [](auto mutate) {
        GeneratorConfig g = default_generator_config();
        mutate(g);
        return g;
    };
    EXPECT_NO_THROW(default_generator_config().validate());
    EXPECT_NO_THROW(bimodal_generator_config().validate());
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.hosts = 0; }).validate(), InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.target_util = 1.0; }).validate(), InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.strata.clear(); }).validate(), InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.strata[0].weight += 0.5; }).validate(), InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.strata[0].shapes[0].shape = ResourceVec::cores_gib(200, 8); })
                     .validate(),
                 InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.min_lifetime_s = 0; }).validate(), InvalidArgument);
    EXPECT_THROW(broken([](GeneratorConfig& g) { g.zones.clear(); }).validate(), InvalidArgument);
    EXPECT_THROW(generate(broken([](GeneratorConfig& g) { g.hosts = 0; })), InvalidArgument);
}

TEST(GeneratorJson, RoundTripAndPartialOverride) {
    const GeneratorConfig g = bimodal_generator_config();
    nlohmann::json j;
    to_json(j, g);
    GeneratorConfig back = default_generator_config();
    from_json(j, back);
    nlohmann::json again;
    to_json(again, back);
    EXPECT_EQ(j, again);
    EXPECT_EQ(render(generate(back)), render(generate(g)));

    GeneratorConfig partial = default_generator_config();
    from_json(nlohmann::json{{"seed", 99}, {"num_vms", 10}}, partial);
    EXPECT_EQ(partial.seed, 99u);
    EXPECT_EQ(partial.num_vms, 10u);
    EXPECT_EQ(partial.strata.size(), default_generator_config().strata.size());
}

TEST(SkewStats, HandComputed) {
    Trace t = {test::record(1, 0, 600, ResourceVec::cores_gib(4, 16)),
               test::record(2, 0, 1800, ResourceVec::cores_gib(4, 16)),
               test::record(3, 0, 7200, ResourceVec::cores_gib(2, 8)),
               test::record(4, -100, 600, ResourceVec::cores_gib(64, 64))};
    const SkewStats s = skew_stats(t);
    EXPECT_EQ(s.vms, 3u);
    EXPECT_DOUBLE_EQ(s.short_vm_fraction, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.long_core_hour_share, 14400.0 / (2400.0 + 7200.0 + 14400.0));
    EXPECT_EQ(skew_stats({}).vms, 0u);
}

TEST(SkewStats, DefaultGeneratorIsSkewed) {
    const SkewStats s = skew_stats(test::default_trace(1));
    EXPECT_GT(s.short_vm_fraction, 0.8);
    EXPECT_GT(s.long_core_hour_share, 0.95);
}

TEST(SplitTrace, FractionDisjointReproducible) {
    const Trace t = generate(small_config(8, 10000));
    const auto [train, test] = split_trace(t, 0.8);
    EXPECT_EQ(train.size() + test.size(), t.size());
    const double frac = static_cast<double>(train.size()) / static_cast<double>(t.size());
    EXPECT_NEAR(frac, 0.8, 0.015);
    std::set<std::uint64_t> ids;
    for (const auto& r : train) ids.insert(r.id.value);
    for (const auto& r : test) EXPECT_EQ(ids.count(r.id.value), 0u);
    const auto again = split_trace(t, 0.8);
    EXPECT_EQ(render(again.first), render(train));
    EXPECT_EQ(render(again.second), render(test));
}

TEST(SplitTrace, BadFractionRejected) {
    const Trace t = generate(small_config(8, 100));
    EXPECT_THROW(split_trace(t, 0.0), InvalidArgument);
    EXPECT_THROW(split_trace(t, 1.0), InvalidArgument);
    EXPECT_THROW(split_trace(t, -0.2), InvalidArgument);
}

}  // namespace
}  // namespace lava

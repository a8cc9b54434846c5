#include <catch2/catch_amalgamated.hpp>

#include "gddq/slicing_env.hpp"

using namespace gddq;

namespace {

EnvConfig tiny_config() {
    EnvConfig cfg;
    SliceSpec s;
    s.id = SliceId::VoLTE;
    s.user_count = 2;
    s.interarrival_ms = TrafficDistribution::uniform(0.0, 160.0);
    s.packet_size_bytes = TrafficDistribution::constant(40.0);
    s.sla_rate_bps = 51e3;
    s.sla_latency_s = 10e-3;
    s.beta = 1.0;
    cfg.slices = {s};
    cfg.total_bandwidth_hz = 2e6;
    cfg.resolution_hz = 1e6;
    cfg.slot_s = 0.5e-3;
    cfg.slots_per_step = 100;
    cfg.seed = 9;
    return cfg;
}

EnvConfig three_slice_config(std::uint64_t seed) {
    EnvConfig cfg;
    SliceSpec volte;
    volte.id = SliceId::VoLTE;
    volte.user_count = 12;
    volte.interarrival_ms = TrafficDistribution::uniform(0.0, 160.0);
    volte.packet_size_bytes = TrafficDistribution::constant(40.0);
    volte.sla_rate_bps = 51e3;
    volte.sla_latency_s = 10e-3;
    SliceSpec video;
    video.id = SliceId::Video;
    video.user_count = 12;
    video.interarrival_ms = TrafficDistribution::truncated_pareto(1.2, 6.0, 12.5);
    video.packet_size_bytes = TrafficDistribution::truncated_pareto(1.2, 100.0, 250.0);
    video.sla_rate_bps = 5e6;
    video.sla_latency_s = 10e-3;
    SliceSpec urllc;
    urllc.id = SliceId::URLLC;
    urllc.user_count = 4;
    urllc.interarrival_ms = TrafficDistribution::truncated_exponential(180.0, 1000.0);
    urllc.packet_size_bytes = TrafficDistribution::discrete_set({800, 1600, 2400, 3200, 4000});
    urllc.sla_rate_bps = 2e6;
    urllc.sla_latency_s = 1e-3;
    cfg.slices = {volte, video, urllc};
    cfg.total_bandwidth_hz = 10e6;
    cfg.resolution_hz = 1e6;
    cfg.slot_s = 0.5e-3;
    cfg.slots_per_step = 400;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("build rejects indivisible bandwidth and empty slice lists") {
    auto cfg = tiny_config();
    cfg.resolution_hz = 3e5;  // 2 MHz not divisible by 0.3 MHz
    CHECK_THROWS_AS(Environment(cfg), ConfigError);
    cfg = tiny_config();
    cfg.slices.clear();
    CHECK_THROWS_AS(Environment(cfg), ConfigError);
}

TEST_CASE("forced single action table") {
    EnvConfig cfg = three_slice_config(1);
    cfg.total_bandwidth_hz = 3.0;
    cfg.resolution_hz = 1.0;
    Environment env(cfg);
    REQUIRE(env.action_table().size() == 1);
    CHECK(env.action_table()[0].units == std::vector<int>{1, 1, 1});
}

TEST_CASE("ssr and utility helpers") {
    CHECK_THAT(slice_ssr(2, 3), Catch::Matchers::WithinAbs(0.6667, 5e-4));
    CHECK(slice_ssr(0, 5) == 0.0);
    CHECK(slice_ssr(0, 0) == 1.0);
    CHECK_THROWS_AS(slice_ssr(4, 3), ConfigError);

    CHECK_THAT(system_utility(100, {1, 1, 1}, 0.01, {1, 1, 1}),
               Catch::Matchers::WithinRel(4.0, 1e-12));
    CHECK(system_utility(0, {0, 0, 0}, 0.3, {1, 2, 3}) == 0.0);
    CHECK_THAT(system_utility(100, {1, 1, 0.5}, 0.01, {1, 4, 6}),
               Catch::Matchers::WithinRel(9.0, 1e-12));
    CHECK_THROWS_AS(system_utility(1, {1, 1}, 0.01, {1}), ConfigError);
}

TEST_CASE("spectrum efficiency is a per-slot time average") {
    CHECK_THAT(spectrum_efficiency({10e6, 10e6, 10e6}, 10e6),
               Catch::Matchers::WithinRel(1.0, 1e-12));
    CHECK(spectrum_efficiency({}, 10e6) == 0.0);
    CHECK(spectrum_efficiency({0, 0}, 10e6) == 0.0);
    CHECK_THAT(spectrum_efficiency({20e6, 0, 20e6, 0}, 10e6),
               Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("empty traffic window yields SSR 1.0 and zero SE") {
    auto cfg = tiny_config();
    // interarrival far beyond the step horizon
    cfg.slices[0].interarrival_ms = TrafficDistribution::constant(1e9);
    Environment env(cfg);
    auto [obs, m] = env.step(env.action_table()[0]);
    CHECK(obs.arrived[0] == 0);
    CHECK(m.ssr[0] == 1.0);
    CHECK(m.se == 0.0);
    CHECK(m.utility == Catch::Approx(1.0));  // beta * 1.0
}

TEST_CASE("single packet delivered within SLA gives SSR 1") {
    auto cfg = tiny_config();
    cfg.slices[0].user_count = 1;
    // exactly one packet at t=30ms inside the 50ms window
    cfg.slices[0].interarrival_ms = TrafficDistribution::constant(30.0);
    Environment env(cfg);
    env.enable_audit(true);
    auto [obs, m] = env.step(env.action_table()[0]);
    REQUIRE(obs.arrived[0] >= 1);
    CHECK(m.ssr[0] == 1.0);
    REQUIRE(!env.audit_log().empty());
    for (const auto& a : env.audit_log()) {
        if (a.counted_ok) {
            CHECK(a.rate_ok);
            CHECK(a.delivery_s <= a.deadline_s);
        }
    }
}

TEST_CASE("determinism: same seed and actions give identical metric streams") {
    auto run = [](std::uint64_t seed) {
        Environment env(three_slice_config(seed));
        std::vector<double> gains;
        const auto& table = env.action_table();
        std::vector<double> out;
        for (int t = 0; t < 5; ++t) {
            auto [obs, m] = env.step(table[(t * 7) % table.size()]);
            out.push_back(m.utility);
            out.push_back(m.se);
            for (double v : m.ssr) out.push_back(v);
            for (long v : obs.arrived) out.push_back(static_cast<double>(v));
        }
        return out;
    };
    auto a = run(77), b = run(77), c = run(78);
    REQUIRE(a == b);  // bitwise identical
    CHECK(a != c);
}

TEST_CASE("queue conservation holds per slice per step") {
    Environment env(three_slice_config(5));
    const auto& table = env.action_table();
    std::vector<long> queued_before(env.n_slices(), 0);
    for (int t = 0; t < 8; ++t) {
        auto [obs, m] = env.step(table[(3 + 5 * t) % table.size()]);
        for (int n = 0; n < env.n_slices(); ++n) {
            long rhs = m.delivered_ok[n] + m.delivered_failed[n] + m.dropped_packets[n] +
                       m.queued_delta[n];
            CHECK(m.arrived[n] == rhs);
        }
    }
}

TEST_CASE("per-step utility identity and SSR bounds") {
    Environment env(three_slice_config(6));
    const auto& table = env.action_table();
    for (int t = 0; t < 6; ++t) {
        auto [obs, m] = env.step(table[t % table.size()]);
        std::vector<double> beta;
        for (int n = 0; n < env.n_slices(); ++n) beta.push_back(1.0);
        double recomputed = system_utility(m.se, m.ssr, env.config().alpha, beta);
        CHECK_THAT(m.utility, Catch::Matchers::WithinAbs(recomputed, 1e-12));
        for (double v : m.ssr) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.se >= 0.0);
    }
}

TEST_CASE("audit: every success satisfies both SLA clauses") {
    auto cfg = three_slice_config(13);
    cfg.slots_per_step = 1000;
    Environment env(cfg);
    env.enable_audit(true);
    env.step(env.action_table()[17 % env.action_table().size()]);
    size_t checked = 0;
    for (const auto& a : env.audit_log()) {
        if (a.counted_ok) {
            CHECK(a.rate_ok);
            CHECK(a.delivery_s <= a.deadline_s);
            ++checked;
        }
    }
    REQUIRE(checked > 0);
}

TEST_CASE("mismatched action is rejected") {
    Environment env(three_slice_config(2));
    Action bad;
    bad.units = {5, 5};  // wrong slice count
    bad.resolution_hz = 1e6;
    CHECK_THROWS_AS(env.step(bad), ConfigError);
    Action bad2;
    bad2.units = {5, 5, 1};  // sums to 11
    bad2.resolution_hz = 1e6;
    CHECK_THROWS_AS(env.step(bad2), ConfigError);
}

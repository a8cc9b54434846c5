#include <catch2/catch_amalgamated.hpp>

#include "gddq/channel.hpp"

using namespace gddq;

TEST_CASE("snr formula") {
    CHECK(snr(1.0, 1.0, 1.0, 1.0) == 1.0);
    CHECK(snr(0.0, 2.0, 1e-3, 1e3) == 0.0);
    // g=2, P=0.5, N0=1e-3, w=1e3 -> 2*0.5/(1e-3*1e3) = 1
    CHECK_THAT(snr(2.0, 0.5, 1e-3, 1e3), Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("link rate is Shannon with base-2 log") {
    CHECK_THAT(link_rate(1.0, 1.0), Catch::Matchers::WithinRel(1.0, 1e-12));
    CHECK_THAT(link_rate(1e6, 15.0), Catch::Matchers::WithinRel(4e6, 1e-12));
    CHECK(link_rate(0.0, 123.0) == 0.0);
}

TEST_CASE("pathloss reference point") {
    ChannelParams ch;
    ch.pathloss_ref_db = 30.0;
    ch.pathloss_exponent = 3.0;
    CHECK_THAT(pathloss_db(ch, 1.0), Catch::Matchers::WithinAbs(30.0, 1e-12));
    CHECK_THAT(pathloss_db(ch, 10.0), Catch::Matchers::WithinAbs(60.0, 1e-12));
    // below the 1 m reference the loss saturates
    CHECK_THAT(pathloss_db(ch, 0.01), Catch::Matchers::WithinAbs(30.0, 1e-12));
}

TEST_CASE("user gains land in a plausible window and are reproducible") {
    ChannelParams ch;
    RngStream a(42), b(42);
    for (int i = 0; i < 256; ++i) {
        double g1 = draw_user_gain(ch, a);
        double g2 = draw_user_gain(ch, b);
        REQUIRE(g1 == g2);
        REQUIRE(g1 > 0);
        REQUIRE(g1 < 1.0);  // never above the 1 m reference by more than shadowing
    }
}

TEST_CASE("channel parameter validation") {
    ChannelParams ch;
    ch.noise_psd_w_hz = 0;
    CHECK_THROWS_AS(ch.validate(), ConfigError);
    ch = ChannelParams{};
    ch.tx_power_w = -1;
    CHECK_THROWS_AS(ch.validate(), ConfigError);
}

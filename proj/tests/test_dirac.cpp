#include <catch2/catch_amalgamated.hpp>

#include "gddq/dirac.hpp"

using namespace gddq;
using namespace gddq::dirac;

TEST_CASE("dirac loss and penalty values") {
    CHECK(dirac_loss(1.0, 7.0, 1.0) == 0.0);        // theta = xi
    CHECK(dirac_loss(2.0, 3.0, 1.0) == 3.0);
    CHECK(dirac_loss(123.0, 0.0, -4.0) == 0.0);     // psi = 0

    CHECK(dirac_penalty(1.0, 17.0) == 0.0);
    CHECK(dirac_penalty(-1.0, 17.0) == 0.0);
    CHECK(dirac_penalty(0.0, 2.0) == 1.0);
    CHECK(dirac_penalty(3.0, 10.0) == 20.0);
    CHECK_THROWS_AS(dirac_penalty(1.0, -1.0), ConfigError);
}

TEST_CASE("vector field pinned values") {
    auto [vt0, vp0] = vector_field(1.0, 0.0, 1.0, 10.0);
    CHECK(vt0 == 0.0);
    CHECK(vp0 == 0.0);  // unique Nash equilibrium

    auto [vt1, vp1] = vector_field(0.0, 1.0, 1.0, 10.0);
    CHECK(vt1 == -1.0);
    CHECK(vp1 == -1.0);

    auto [vt2, vp2] = vector_field(1.0, -1.0, 0.0, 2.0);
    CHECK(vt2 == 1.0);
    CHECK(vp2 == 1.0);
}

TEST_CASE("vector field vanishes only at (xi, 0) on a grid") {
    const double xi = 1.5, lambda = 10.0;
    int zeros = 0;
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
            double theta = xi - 5.0 + 10.0 * i / 200.0;
            double psi = -5.0 + 10.0 * j / 200.0;
            auto [vt, vp] = vector_field(theta, psi, xi, lambda);
            if (vt == 0.0 && vp == 0.0) {
                ++zeros;
                CHECK(theta == xi);
                CHECK(psi == 0.0);
            }
        }
    }
    CHECK(zeros == 1);
}

TEST_CASE("equilibrium start stays put forever") {
    DiracConfig cfg;
    cfg.xi_schedule = {{0, 2.0}};
    cfg.theta0 = 2.0;
    cfg.psi0 = 0.0;
    cfg.steps = 5000;
    for (auto mode : {UpdateMode::Alternating, UpdateMode::Simultaneous}) {
        cfg.update_mode = mode;
        auto traj = simulate(cfg);
        REQUIRE(traj.points.size() == 5001);
        for (const auto& p : traj.points) {
            CHECK(p.theta == 2.0);
            CHECK(p.psi == 0.0);
        }
    }
}

TEST_CASE("trajectory bookkeeping: xi changes recorded as events") {
    DiracConfig cfg;
    cfg.xi_schedule = {{0, 1.0}, {10, 3.0}};
    cfg.steps = 20;
    auto traj = simulate(cfg);
    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].first == 10);
    CHECK(traj.events[0].second == 3.0);
    CHECK(traj.xi_at.front() == 1.0);
    CHECK(traj.xi_at.back() == 3.0);
}

TEST_CASE("steps_to_reconverge: unchanged xi yields zero") {
    DiracConfig cfg;
    cfg.xi_schedule = {{0, 1.0}};
    cfg.theta0 = 1.0;
    cfg.psi0 = 0.0;
    cfg.steps = 500;
    auto traj = simulate(cfg);
    CHECK(steps_to_reconverge(traj, 1.0, 0.2) == 0);
}

TEST_CASE("steps_to_reconverge is strictly positive when starting outside the band") {
    DiracConfig cfg;
    cfg.lambda = 0.3;
    cfg.h = 0.01;
    cfg.disc_steps_per_gen = 1;
    cfg.xi_schedule = {{0, 1.0}, {100, 2.0}};  // delta = 1 > 2 * band
    cfg.theta0 = 1.0;
    cfg.psi0 = 0.0;
    cfg.steps = 200000;
    auto traj = simulate(cfg);
    long steps = steps_to_reconverge(traj, 2.0, 0.2);
    if (steps != kNotReconverged) CHECK(steps > 0);
}

TEST_CASE("invalid configs are rejected") {
    DiracConfig cfg;
    cfg.h = 0;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = DiracConfig{};
    cfg.xi_schedule = {{0, 1.0}, {0, 2.0}};
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = DiracConfig{};
    cfg.steps = 0;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
}

#include <catch2/catch_amalgamated.hpp>

#include "gddq/nn/optimizer.hpp"

using namespace gddq;
using namespace gddq::nn;

TEST_CASE("sgd step") {
    ParamSet ps;
    ps.add("w", Mat::Constant(1, 1, 1.0));
    Optimizer opt({OptimKind::SGD, 0.1, 0.0});
    opt.step(ps, {Mat::Constant(1, 1, 2.0)});
    CHECK_THAT(ps.at("w")(0, 0), Catch::Matchers::WithinRel(0.8, 1e-12));
    CHECK(ps.version == 1);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
    ParamSet ps;
    ps.add("w", Mat::Constant(2, 2, 3.0));
    for (auto kind : {OptimKind::SGD, OptimKind::Adam, OptimKind::RMSProp}) {
        ParamSet copy = ps;
        Optimizer opt({kind, 0.0, 0.0});
        opt.step(copy, {Mat::Constant(2, 2, 5.0)});
        CHECK(copy.at("w") == ps.at("w"));
        CHECK(copy.version == 1);
    }
}

TEST_CASE("global norm clipping rescales the applied gradient") {
    ParamSet ps;
    ps.add("w", Mat::Zero(1, 1));
    Optimizer opt({OptimKind::SGD, 1.0, 1.0});
    // grad norm 10 -> clipped to 1 -> w = -1
    opt.step(ps, {Mat::Constant(1, 1, 10.0)});
    CHECK_THAT(ps.at("w")(0, 0), Catch::Matchers::WithinAbs(-1.0, 1e-12));

    // norm across tensors: grads (3, 4) -> norm 5 -> scaled by 1/5
    ParamSet ps2;
    ps2.add("a", Mat::Zero(1, 1));
    ps2.add("b", Mat::Zero(1, 1));
    Optimizer opt2({OptimKind::SGD, 1.0, 1.0});
    opt2.step(ps2, {Mat::Constant(1, 1, 3.0), Mat::Constant(1, 1, 4.0)});
    CHECK_THAT(ps2.at("a")(0, 0), Catch::Matchers::WithinAbs(-0.6, 1e-12));
    CHECK_THAT(ps2.at("b")(0, 0), Catch::Matchers::WithinAbs(-0.8, 1e-12));
}

TEST_CASE("non-finite gradients raise a divergence error") {
    ParamSet ps;
    ps.add("w", Mat::Zero(1, 1));
    Optimizer opt({OptimKind::Adam, 1e-3, 0.0});
    CHECK_THROWS_AS(opt.step(ps, {Mat::Constant(1, 1, std::nan(""))}), NumericalError);
}

TEST_CASE("shape mismatches are rejected") {
    ParamSet ps;
    ps.add("w", Mat::Zero(2, 2));
    Optimizer opt({OptimKind::SGD, 0.1, 0.0});
    CHECK_THROWS_AS(opt.step(ps, {Mat::Zero(1, 2)}), ConfigError);
    CHECK_THROWS_AS(opt.step(ps, {}), ConfigError);
}

TEST_CASE("adam drives a quadratic toward its minimum") {
    ParamSet ps;
    ps.add("w", Mat::Constant(1, 1, 4.0));
    Optimizer opt({OptimKind::Adam, 0.05, 0.0});
    for (int i = 0; i < 2000; ++i) {
        double w = ps.at("w")(0, 0);
        opt.step(ps, {Mat::Constant(1, 1, 2.0 * (w - 1.5))});
    }
    CHECK_THAT(ps.at("w")(0, 0), Catch::Matchers::WithinAbs(1.5, 1e-3));
    CHECK(ps.version == 2000);
}

#include <catch2/catch_amalgamated.hpp>

#include "gddq/nn/gradcheck.hpp"
#include "gddq/nn/nets.hpp"
#include "gddq/nn/tape.hpp"

using namespace gddq;
using namespace gddq::nn;

namespace {

Mat random_mat(int r, int c, RngStream& rng, double scale = 1.0) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = scale * rng.normal();
    return m;
}

}  // namespace

TEST_CASE("tape computes grads of a composite expression (vs finite differences)") {
    RngStream rng(101);
    ParamSet ps;
    ps.add("A", random_mat(4, 3, rng));
    ps.add("b", random_mat(4, 1, rng));
    Mat x = random_mat(3, 5, rng);

    auto loss = [&](const ParamSet& p) {
        Tape t;
        auto refs = bind_params(t, p, false);
        ValueRef h = t.add_bias(t.matmul(refs[0], t.constant(x)), refs[1]);
        h = t.activation(h, Act::Tanh);
        h = t.hadamard(h, h);
        h = t.square(t.add_const(t.abs(h), -0.5));
        return t.scalar(t.scale(t.mean_all(h), 3.0));
    };

    Tape t;
    auto refs = bind_params(t, ps, true);
    ValueRef h = t.add_bias(t.matmul(refs[0], t.constant(x)), refs[1]);
    h = t.activation(h, Act::Tanh);
    h = t.hadamard(h, h);
    h = t.square(t.add_const(t.abs(h), -0.5));
    ValueRef root = t.scale(t.mean_all(h), 3.0);
    t.backward(root);
    auto grads = collect_grads(t, ps);

    auto report = gradcheck(ps, loss, grads);
    CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("repeat/pool/gather ops round-trip gradients correctly") {
    RngStream rng(202);
    ParamSet ps;
    ps.add("W", random_mat(6, 4, rng));
    Mat x = random_mat(4, 3, rng);
    std::vector<int> rows = {2, 0, 5};

    auto build = [&](Tape& t, const std::vector<ValueRef>& refs) {
        ValueRef h = t.matmul(refs[0], t.constant(x));  // 6 x 3
        ValueRef rep = t.repeat_cols(h, 4);             // 6 x 12
        ValueRef gathered = t.gather_rows(rep, rows, 4);  // 1 x 12
        ValueRef pooled = t.mean_pool_cols(t.sub(rep, rep), 4);  // zero, exercises pool
        return t.add(t.mean_all(t.square(gathered)), t.mean_all(pooled));
    };
    auto loss = [&](const ParamSet& p) {
        Tape t;
        auto refs = bind_params(t, p, false);
        return t.scalar(build(t, refs));
    };

    Tape t;
    auto refs = bind_params(t, ps, true);
    t.backward(build(t, refs));
    auto grads = collect_grads(t, ps);
    auto report = gradcheck(ps, loss, grads);
    CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("activation_deriv backward matches finite differences for tanh") {
    RngStream rng(303);
    ParamSet ps;
    ps.add("W", random_mat(3, 3, rng));
    Mat x = random_mat(3, 2, rng);

    auto build = [&](Tape& t, const std::vector<ValueRef>& refs) {
        ValueRef z = t.matmul(refs[0], t.constant(x));
        return t.mean_all(t.square(t.activation_deriv(z, Act::Tanh)));
    };
    auto loss = [&](const ParamSet& p) {
        Tape t;
        auto refs = bind_params(t, p, false);
        return t.scalar(build(t, refs));
    };
    Tape t;
    auto refs = bind_params(t, ps, true);
    t.backward(build(t, refs));
    auto report = gradcheck(ps, loss, collect_grads(t, ps));
    CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("detach blocks gradient flow") {
    ParamSet ps;
    ps.add("w", Mat::Constant(1, 1, 2.0));
    Tape t;
    auto refs = bind_params(t, ps, true);
    ValueRef d = t.detach(refs[0]);
    ValueRef root = t.mean_all(t.hadamard(d, d));
    t.backward(root);
    auto grads = collect_grads(t, ps);
    CHECK(grads[0](0, 0) == 0.0);
}

TEST_CASE("forward passes are pure") {
    RngStream rng(404);
    GeneratorConfig cfg;
    cfg.state_dim = 3;
    cfg.n_actions = 5;
    cfg.particles = 4;
    cfg.embed_width = 8;
    cfg.trunk_widths = {8};
    QuantileGenerator gen(cfg, rng);
    Eigen::VectorXd s(3);
    s << 0.3, 0.5, 0.9;
    Eigen::VectorXd taus(4);
    taus << 0.1, 0.4, 0.6, 0.9;
    Mat a = gen.forward(s, taus).values;
    Mat b = gen.forward(s, taus).values;
    REQUIRE(a == b);  // bitwise
}

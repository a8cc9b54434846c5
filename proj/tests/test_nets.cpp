#include <catch2/catch_amalgamated.hpp>

#include "gddq/nn/gradcheck.hpp"
#include "gddq/nn/nets.hpp"

using namespace gddq;
using namespace gddq::nn;

namespace {

GeneratorConfig small_cfg() {
    GeneratorConfig cfg;
    cfg.state_dim = 3;
    cfg.n_actions = 5;
    cfg.particles = 4;
    cfg.embed_width = 8;
    cfg.trunk_widths = {10, 8};
    return cfg;
}

void zero_tensor(ParamSet& ps, const std::string& name) { ps.at(name).setZero(); }

}  // namespace

TEST_CASE("generator output shape is n_actions x N") {
    RngStream rng(1);
    QuantileGenerator gen(small_cfg(), rng);
    Eigen::VectorXd s(3);
    s << 0.1, 0.2, 0.3;
    Eigen::VectorXd taus(1);
    taus << 0.5;
    auto p = gen.forward(s, taus);
    CHECK(p.values.rows() == 5);
    CHECK(p.values.cols() == 1);

    Eigen::VectorXd taus4(4);
    taus4 << 0.2, 0.4, 0.6, 0.8;
    auto p4 = gen.forward(s, taus4);
    CHECK(p4.values.rows() == 5);
    CHECK(p4.values.cols() == 4);
}

TEST_CASE("zeroed final layer makes every particle equal the bias") {
    RngStream rng(2);
    QuantileGenerator gen(small_cfg(), rng);
    int last = gen.params().count() >= 2 ? 1 : 0;
    (void)last;
    // final head layer tensors carry the highest layer index
    zero_tensor(gen.params(), "gen.head.W2");
    gen.params().at("gen.head.b2").setConstant(0.75);
    Eigen::VectorXd s(3);
    s << 0.3, 0.1, 0.9;
    Eigen::VectorXd taus(4);
    taus << 0.1, 0.3, 0.7, 0.9;
    auto p = gen.forward(s, taus);
    CHECK((p.values.array() == 0.75).all());
}

TEST_CASE("hadamard fusion with an all-ones sample embedding is the identity") {
    RngStream rng(3);
    QuantileGenerator gen(small_cfg(), rng);
    // rig the tau branch to output exactly ones: zero weights, bias 1, and
    // LeakyReLU(1) = 1
    zero_tensor(gen.params(), "gen.tau_embed.W0");
    zero_tensor(gen.params(), "gen.tau_embed.W1");
    gen.params().at("gen.tau_embed.b0").setZero();
    gen.params().at("gen.tau_embed.b1").setConstant(1.0);
    Eigen::VectorXd s(3);
    s << 0.4, 0.5, 0.6;
    Eigen::VectorXd taus(3);
    taus << 0.2, 0.5, 0.8;
    Mat fused = gen.fused_embedding(s, taus);
    Mat state_emb = gen.state_embedding(s);
    REQUIRE(fused.cols() == 3);
    for (int c = 0; c < fused.cols(); ++c) {
        CHECK((fused.col(c) - state_emb.col(0)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("dueling forward shapes and zeroed advantage head") {
    RngStream rng(4);
    DuelingGenerator gen(small_cfg(), rng);
    Eigen::VectorXd s(3);
    s << 0.2, 0.4, 0.6;
    Eigen::VectorXd taus(4);
    taus << 0.15, 0.35, 0.55, 0.95;
    auto out = gen.forward(s, taus);
    CHECK(out.value_particles.values.rows() == 1);
    CHECK(out.value_particles.values.cols() == 4);
    CHECK(out.advantages.size() == 5);

    zero_tensor(gen.params(), "duel.adv.W0");
    gen.params().at("duel.adv.b0").setZero();
    auto out2 = gen.forward(s, taus);
    CHECK(out2.advantages.cwiseAbs().maxCoeff() == 0.0);
    // Q(s,a) = V(s) for all a
    auto q = gen.q_values(s, taus);
    double v = out2.value_particles.values.mean();
    for (int a = 0; a < q.size(); ++a) CHECK_THAT(q(a), Catch::Matchers::WithinAbs(v, 1e-12));
}

TEST_CASE("determinism of dueling forward") {
    RngStream rng(5);
    DuelingGenerator gen(small_cfg(), rng);
    Eigen::VectorXd s(3);
    s << 0.9, 0.8, 0.7;
    Eigen::VectorXd taus(2);
    taus << 0.25, 0.75;
    auto a = gen.forward(s, taus);
    auto b = gen.forward(s, taus);
    REQUIRE(a.value_particles.values == b.value_particles.values);
    REQUIRE(a.advantages == b.advantages);
}

TEST_CASE("discriminator: zeroed weights output the bias; linear case") {
    RngStream rng(6);
    DiscriminatorConfig cfg;
    cfg.widths = {1, 4, 1};
    Discriminator d(cfg, rng);
    for (auto& t : d.params().tensors) t.value.setZero();
    d.params().at("disc.b1").setConstant(0.25);
    CHECK(d.forward(3.0) == 0.25);
    CHECK(d.forward(-17.0) == 0.25);

    // single linear layer D(x) = psi x with psi = 2
    DiscriminatorConfig lin;
    lin.widths = {1, 1};
    RngStream rng2(7);
    Discriminator dl(lin, rng2);
    dl.params().at("disc.W0").setConstant(2.0);
    dl.params().at("disc.b0").setZero();
    CHECK(dl.forward(3.0) == 6.0);
    CHECK(dl.input_gradient(5.0) == 2.0);
    CHECK_THROWS_AS(dl.forward(std::nan("")), NumericalError);
}

TEST_CASE("discriminator input gradient matches finite differences") {
    RngStream rng(8);
    DiscriminatorConfig cfg;
    cfg.widths = {1, 6, 6, 1};
    cfg.act = Act::Tanh;
    Discriminator d(cfg, rng);
    for (double x : {-1.3, -0.2, 0.4, 2.2}) {
        double h = 1e-6;
        double fd = (d.forward(x + h) - d.forward(x - h)) / (2 * h);
        double an = d.input_gradient(x);
        CHECK_THAT(an, Catch::Matchers::WithinRel(fd, 1e-6));
    }
    // LeakyReLU away from kinks
    DiscriminatorConfig cfg2;
    cfg2.widths = {1, 6, 6, 1};
    RngStream rng2(9);
    Discriminator d2(cfg2, rng2);
    for (double x : {-1.1, 0.7, 1.9}) {
        double h = 1e-6;
        double fd = (d2.forward(x + h) - d2.forward(x - h)) / (2 * h);
        double an = d2.input_gradient(x);
        CHECK_THAT(an, Catch::Matchers::WithinRel(fd, 1e-6));
    }
}

TEST_CASE("gradient penalty values") {
    // |dD/dx| = 1 -> 0 penalty
    DiscriminatorConfig lin;
    lin.widths = {1, 1};
    RngStream rng(10);
    Discriminator d(lin, rng);
    d.params().at("disc.W0").setConstant(1.0);
    d.params().at("disc.b0").setZero();
    Tape t;
    auto refs = bind_params(t, d.params(), false);
    Mat xh = Mat::Constant(1, 8, 0.3);
    CHECK(t.scalar(d.gradient_penalty(t, xh, 5.0, refs)) == 0.0);

    // |dD/dx| = 2 with coefficient lambda/2 = 5 -> 5
    d.params().at("disc.W0").setConstant(2.0);
    Tape t2;
    auto refs2 = bind_params(t2, d.params(), false);
    CHECK_THAT(t2.scalar(d.gradient_penalty(t2, xh, 5.0, refs2)),
               Catch::Matchers::WithinRel(5.0, 1e-12));

    // psi = 0, coefficient lambda/2 with lambda = 2 -> 1.0
    d.params().at("disc.W0").setConstant(0.0);
    Tape t3;
    auto refs3 = bind_params(t3, d.params(), false);
    CHECK_THAT(t3.scalar(d.gradient_penalty(t3, xh, 1.0, refs3)),
               Catch::Matchers::WithinRel(1.0, 1e-12));
}

TEST_CASE("penalty parameter-gradient passes finite differences") {
    RngStream rng(11);
    DiscriminatorConfig cfg;
    cfg.widths = {1, 6, 1};
    cfg.act = Act::Tanh;
    Discriminator d(cfg, rng);
    Mat xh(1, 5);
    xh << -0.8, -0.1, 0.2, 0.9, 1.4;

    auto loss = [&](const ParamSet& ps) {
        Discriminator probe = d;
        probe.set_params(ps);
        Tape t;
        auto refs = bind_params(t, ps, false);
        return t.scalar(probe.gradient_penalty(t, xh, 5.0, refs));
    };
    Tape t;
    auto refs = bind_params(t, d.params(), true);
    ValueRef gp = d.gradient_penalty(t, xh, 5.0, refs);
    t.backward(gp);
    auto report = gradcheck(d.params(), loss, collect_grads(t, d.params()));
    CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("clone_params is a deep copy") {
    RngStream rng(12);
    QuantileGenerator gen(small_cfg(), rng);
    ParamSet clone = clone_params(gen.params());
    CHECK(clone.version == gen.params().version);

    Eigen::VectorXd s(3);
    s << 0.5, 0.5, 0.5;
    Eigen::VectorXd taus(2);
    taus << 0.3, 0.6;
    Mat before = gen.forward(s, taus).values;

    QuantileGenerator gen2 = gen;
    gen2.set_params(clone);
    REQUIRE(gen2.forward(s, taus).values == before);

    // mutate the source; the clone must not move
    gen.params().at("gen.head.b2").array() += 1.0;
    Mat after_src = gen.forward(s, taus).values;
    Mat after_clone = gen2.forward(s, taus).values;
    CHECK(after_src != before);
    CHECK(after_clone == before);
}

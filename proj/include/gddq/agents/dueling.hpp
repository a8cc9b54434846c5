#pragma once

#include "gddq/agents/common.hpp"
#include "gddq/agents/losses.hpp"
#include "gddq/agents/replay.hpp"
#include "gddq/nn/optimizer.hpp"

namespace gddq::agents {

// Dueling variant: the generator approximates the state-value distribution
// plus per-action advantages; the critic works on state-value particles and
// the generator loss adds the squared TD term. Trains every iteration once
// the buffer holds a minibatch, n_critic critic steps per generator step.
class DuelingAgent : public Agent {
public:
    DuelingAgent(const AgentConfig& cfg, int state_dim, int n_actions, const SeedTree& seeds)
        : cfg_(cfg),
          buffer_(cfg.buffer),
          explore_rng_(seeds.stream("agent/explore")),
          tau_rng_(seeds.stream("agent/taus")),
          batch_rng_(seeds.stream("agent/minibatch")),
          interp_rng_(seeds.stream("agent/interp")) {
        cfg_.validate();
        nn::GeneratorConfig g;
        g.state_dim = state_dim;
        g.n_actions = n_actions;
        g.particles = cfg_.particles;
        g.embed_width = cfg_.embed_width;
        g.trunk_widths = cfg_.trunk_widths;
        g.cosine_embedding = cfg_.cosine_embedding;
        auto init_rng = seeds.stream("agent/init_g");
        gen_ = nn::DuelingGenerator(g, init_rng);
        target_params_ = nn::clone_params(gen_.params());

        nn::DiscriminatorConfig d;
        d.widths = {1};
        for (int w : cfg_.disc_hidden) d.widths.push_back(w);
        d.widths.push_back(1);
        auto init_rng_d = seeds.stream("agent/init_d");
        disc_ = nn::Discriminator(d, init_rng_d);

        opt_g_ = nn::Optimizer({nn::OptimKind::Adam, cfg_.lr_g, cfg_.clip_norm});
        opt_d_ = nn::Optimizer({nn::OptimKind::Adam, cfg_.lr_d, cfg_.clip_norm});
    }

    std::string algo() const override { return "dueling"; }

    int select_action(const Eigen::VectorXd& state, double epsilon) override {
        int n_actions = gen_.config().n_actions;
        if (explore_rng_.uniform() < epsilon)
            return static_cast<int>(explore_rng_.uniform_index(n_actions));
        Eigen::VectorXd taus = draw_taus(cfg_.particles);
        return argmax_lowest(gen_.q_values(state, taus));
    }

    void observe(TransitionTuple t) override { buffer_.push(std::move(t)); }

    TrainLog train_if_due(long) override {
        if (buffer_.size() < static_cast<size_t>(cfg_.batch_size)) return {};
        TrainLog log;
        log.trained = true;
        for (int n = 0; n < cfg_.n_critic; ++n) log.loss_d += critic_step();
        log.loss_d /= cfg_.n_critic;
        log.loss_g = generator_step(true);
        return log;
    }

    void sync_if_due(long iteration) override {
        if (iteration % cfg_.target_sync == 0) target_params_ = nn::clone_params(gen_.params());
    }

    const nn::ParamSet* checkpoint_params() const override { return &gen_.params(); }
    void restore_params(const nn::ParamSet& ps) override {
        gen_.set_params(ps);
        target_params_ = nn::clone_params(ps);
    }

    const nn::DuelingGenerator& generator() const { return gen_; }
    nn::DuelingGenerator& generator() { return gen_; }
    nn::Discriminator& discriminator() { return disc_; }
    ReplayBuffer& buffer() { return buffer_; }
    const AgentConfig& config() const { return cfg_; }

    double critic_step() {
        auto idx = buffer_.sample_indices(cfg_.batch_size, batch_rng_);
        const int m = static_cast<int>(idx.size());
        const int N = cfg_.particles;
        const int S = static_cast<int>(buffer_[idx[0]].state.size());

        DuelCriticBatch b;
        b.states.resize(S, m);
        Mat next_states(S, m);
        Eigen::VectorXd rewards(m);
        b.taus.resize(1, m * N);
        for (int i = 0; i < m; ++i) {
            const auto& tr = buffer_[idx[i]];
            b.states.col(i) = tr.state;
            next_states.col(i) = tr.next_state;
            rewards(i) = tr.reward;
            for (int j = 0; j < N; ++j) b.taus(0, i * N + j) = tau_rng_.uniform_open();
        }

        Mat target_v;
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, target_params_, false);
            target_v = t.val(gen_.forward(t, next_states, b.taus, refs).value_particles);
        }
        b.targets.resize(1, m * N);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < N; ++j)
                b.targets(0, i * N + j) = rewards(i) + cfg_.gamma * target_v(0, i * N + j);

        Mat est_v;
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, gen_.params(), false);
            est_v = t.val(gen_.forward(t, b.states, b.taus, refs).value_particles);
        }
        b.x_hat.resize(1, m * N);
        for (int i = 0; i < m; ++i) {
            double eps = interp_rng_.uniform();
            for (int j = 0; j < N; ++j)
                b.x_hat(0, i * N + j) =
                    eps * b.targets(0, i * N + j) + (1 - eps) * est_v(0, i * N + j);
        }

        nn::Tape t;
        auto gen_refs = nn::bind_params(t, gen_.params(), false);
        auto disc_refs = nn::bind_params(t, disc_.params(), true);
        ValueRef ld = duel_d_loss(t, gen_, gen_refs, disc_, disc_refs, b, cfg_.lambda_gp);
        double loss = t.scalar(ld);
        t.backward(ld);
        opt_d_.step(disc_.params(), nn::collect_grads(t, disc_.params()));
        return loss;
    }

    double generator_step(bool adversarial) {
        auto idx = buffer_.sample_indices(cfg_.batch_size, batch_rng_);
        const int m = static_cast<int>(idx.size());
        const int N = cfg_.particles;
        const int S = static_cast<int>(buffer_[idx[0]].state.size());

        DuelActorBatch b;
        b.particles = N;
        b.states.resize(S, m);
        Mat next_states(S, m);
        Eigen::VectorXd rewards(m);
        b.actions.resize(m);
        b.taus.resize(1, m * N);
        for (int i = 0; i < m; ++i) {
            const auto& tr = buffer_[idx[i]];
            b.states.col(i) = tr.state;
            next_states.col(i) = tr.next_state;
            rewards(i) = tr.reward;
            b.actions[i] = tr.action;
            for (int j = 0; j < N; ++j) b.taus(0, i * N + j) = tau_rng_.uniform_open();
        }

        // Q_hat = r + gamma mean(Vhat(s')) + gamma max_a advhat(s',a), target net
        b.q_targets.resize(m);
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, target_params_, false);
            auto out = gen_.forward(t, next_states, b.taus, refs);
            const Mat& v = t.val(out.value_particles);
            const Mat& adv = t.val(out.advantages);
            for (int i = 0; i < m; ++i) {
                double v_mean = v.middleCols(i * N, N).mean();
                double adv_max = adv.col(i).maxCoeff();
                b.q_targets(i) = rewards(i) + cfg_.gamma * v_mean + cfg_.gamma * adv_max;
            }
        }

        nn::Tape t;
        auto gen_refs = nn::bind_params(t, gen_.params(), true);
        auto disc_refs = nn::bind_params(t, disc_.params(), false);
        ValueRef lg = duel_g_loss(t, gen_, gen_refs, disc_, disc_refs, b, adversarial);
        double loss = t.scalar(lg);
        t.backward(lg);
        opt_g_.step(gen_.params(), nn::collect_grads(t, gen_.params()));
        return loss;
    }

private:
    Eigen::VectorXd draw_taus(int n) {
        Eigen::VectorXd taus(n);
        for (int i = 0; i < n; ++i) taus(i) = tau_rng_.uniform_open();
        return taus;
    }

    AgentConfig cfg_;
    ReplayBuffer buffer_;
    RngStream explore_rng_, tau_rng_, batch_rng_, interp_rng_;
    nn::DuelingGenerator gen_;
    nn::ParamSet target_params_;
    nn::Discriminator disc_;
    nn::Optimizer opt_g_, opt_d_;
};

}  // namespace gddq::agents

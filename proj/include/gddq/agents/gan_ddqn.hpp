#pragma once

#include "gddq/agents/common.hpp"
#include "gddq/agents/losses.hpp"
#include "gddq/agents/replay.hpp"
#include "gddq/nn/optimizer.hpp"

namespace gddq::agents {

// Algorithm: quantile generator approximates the action-value distribution;
// a WGAN-GP critic scores generated particles against Bellman targets from a
// periodically cloned target generator. Trains in whole-buffer sweeps every
// train_every iterations once the buffer is full.
class GanDdqnAgent : public Agent {
public:
    GanDdqnAgent(const AgentConfig& cfg, int state_dim, int n_actions, const SeedTree& seeds)
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
        gen_ = nn::QuantileGenerator(g, init_rng);
        target_params_ = nn::clone_params(gen_.params());

        nn::DiscriminatorConfig d;
        d.widths = {1};
        for (int w : cfg_.disc_hidden) d.widths.push_back(w);
        d.widths.push_back(1);
        auto init_rng_d = seeds.stream("agent/init_d");
        disc_ = nn::Discriminator(d, init_rng_d);

        nn::OptimConfig og{nn::OptimKind::Adam, cfg_.lr_g, cfg_.clip_norm};
        nn::OptimConfig od{nn::OptimKind::Adam, cfg_.lr_d, cfg_.clip_norm};
        opt_g_ = nn::Optimizer(og);
        opt_d_ = nn::Optimizer(od);
    }

    std::string algo() const override { return "gan_ddqn"; }

    int select_action(const Eigen::VectorXd& state, double epsilon) override {
        int n_actions = gen_.config().n_actions;
        if (explore_rng_.uniform() < epsilon)
            return static_cast<int>(explore_rng_.uniform_index(n_actions));
        Eigen::VectorXd taus = draw_taus(cfg_.particles);
        return argmax_lowest(gen_.q_values(state, taus));
    }

    void observe(TransitionTuple t) override { buffer_.push(std::move(t)); }

    TrainLog train_if_due(long iteration) override {
        if (!buffer_.full() || iteration % cfg_.train_every != 0) return {};
        return train_epoch();
    }

    // One sweep over the whole buffer in minibatches without replacement.
    TrainLog train_epoch() {
        auto order = buffer_.shuffled_indices(batch_rng_);
        TrainLog log;
        log.trained = true;
        int batches = 0;
        for (size_t off = 0; off < order.size(); off += cfg_.batch_size) {
            size_t mb = std::min<size_t>(cfg_.batch_size, order.size() - off);
            auto [ld, lg] = train_minibatch({order.begin() + off, order.begin() + off + mb});
            log.loss_d += ld;
            log.loss_g += lg;
            ++batches;
        }
        log.loss_d /= batches;
        log.loss_g /= batches;
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

    const nn::QuantileGenerator& generator() const { return gen_; }
    nn::QuantileGenerator& generator() { return gen_; }
    const nn::ParamSet& target_params() const { return target_params_; }
    nn::Discriminator& discriminator() { return disc_; }
    ReplayBuffer& buffer() { return buffer_; }
    const AgentConfig& config() const { return cfg_; }

private:
    Eigen::VectorXd draw_taus(int n) {
        Eigen::VectorXd taus(n);
        for (int i = 0; i < n; ++i) taus(i) = tau_rng_.uniform_open();
        return taus;
    }

    std::pair<double, double> train_minibatch(std::vector<size_t> idx) {
        const int m = static_cast<int>(idx.size());
        const int N = cfg_.particles;
        const int S = static_cast<int>(buffer_[idx[0]].state.size());

        GanBatch b;
        b.particles = N;
        b.states.resize(S, m);
        b.taus.resize(1, m * N);
        Mat next_states(S, m);
        Eigen::VectorXd rewards(m);
        b.actions.resize(m);
        for (int i = 0; i < m; ++i) {
            const auto& tr = buffer_[idx[i]];
            b.states.col(i) = tr.state;
            next_states.col(i) = tr.next_state;
            rewards(i) = tr.reward;
            b.actions[i] = tr.action;
            for (int j = 0; j < N; ++j) b.taus(0, i * N + j) = tau_rng_.uniform_open();
        }

        // Bellman targets from the target generator (no gradients)
        Mat target_particles;
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, target_params_, false);
            target_particles = t.val(gen_.forward(t, next_states, b.taus, refs));
        }
        b.targets.resize(1, m * N);
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd means =
                target_particles.middleCols(i * N, N).rowwise().mean();
            int a_star = argmax_lowest(means);
            for (int j = 0; j < N; ++j)
                b.targets(0, i * N + j) =
                    rewards(i) + cfg_.gamma * target_particles(a_star, i * N + j);
        }

        // current generator output, reused for the interpolates
        Mat gen_now;
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, gen_.params(), false);
            Mat all = t.val(gen_.forward(t, b.states, b.taus, refs));
            gen_now.resize(1, m * N);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < N; ++j)
                    gen_now(0, i * N + j) = all(b.actions[i], i * N + j);
        }
        b.x_hat.resize(1, m * N);
        for (int i = 0; i < m; ++i) {
            double eps = interp_rng_.uniform();
            for (int j = 0; j < N; ++j)
                b.x_hat(0, i * N + j) = eps * b.targets(0, i * N + j) +
                                        (1 - eps) * gen_now(0, i * N + j);
        }

        // discriminator step (generator frozen)
        double loss_d;
        {
            nn::Tape t;
            auto gen_refs = nn::bind_params(t, gen_.params(), false);
            auto disc_refs = nn::bind_params(t, disc_.params(), true);
            ValueRef ld = gan_d_loss(t, gen_, gen_refs, disc_, disc_refs, b, cfg_.lambda_gp);
            loss_d = t.scalar(ld);
            t.backward(ld);
            opt_d_.step(disc_.params(), nn::collect_grads(t, disc_.params()));
        }
        // generator step against the updated discriminator
        double loss_g;
        {
            nn::Tape t;
            auto gen_refs = nn::bind_params(t, gen_.params(), true);
            auto disc_refs = nn::bind_params(t, disc_.params(), false);
            ValueRef lg = gan_g_loss(t, gen_, gen_refs, disc_, disc_refs, b);
            loss_g = t.scalar(lg);
            t.backward(lg);
            opt_g_.step(gen_.params(), nn::collect_grads(t, gen_.params()));
        }
        return {loss_d, loss_g};
    }

    AgentConfig cfg_;
    ReplayBuffer buffer_;
    RngStream explore_rng_, tau_rng_, batch_rng_, interp_rng_;
    nn::QuantileGenerator gen_;
    nn::ParamSet target_params_;
    nn::Discriminator disc_;
    nn::Optimizer opt_g_, opt_d_;
};

}  // namespace gddq::agents

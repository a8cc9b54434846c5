#pragma once

#include "gddq/agents/common.hpp"
#include "gddq/agents/losses.hpp"
#include "gddq/agents/replay.hpp"
#include "gddq/nn/optimizer.hpp"

namespace gddq::agents {

// Plain DQN baseline: expectation-valued Q network trained on the squared TD
// error with a target network for the bootstrapped max.
class DqnAgent : public Agent {
public:
    DqnAgent(const AgentConfig& cfg, int state_dim, int n_actions, const SeedTree& seeds)
        : cfg_(cfg),
          n_actions_(n_actions),
          buffer_(cfg.buffer),
          explore_rng_(seeds.stream("agent/explore")),
          batch_rng_(seeds.stream("agent/minibatch")) {
        cfg_.validate();
        q_net_.widths.push_back(state_dim);
        for (int w : cfg_.dqn_hidden) q_net_.widths.push_back(w);
        q_net_.widths.push_back(n_actions);
        q_net_.prefix = "dqn";
        auto init_rng = seeds.stream("agent/init_g");
        q_net_.init_params(params_, nn::Init::UniformFanIn, init_rng);
        target_params_ = nn::clone_params(params_);
        opt_ = nn::Optimizer({nn::OptimKind::Adam, cfg_.lr_g, cfg_.clip_norm});
    }

    std::string algo() const override { return "dqn"; }

    int select_action(const Eigen::VectorXd& state, double epsilon) override {
        if (explore_rng_.uniform() < epsilon)
            return static_cast<int>(explore_rng_.uniform_index(n_actions_));
        return argmax_lowest(q_values(state));
    }

    Eigen::VectorXd q_values(const Eigen::VectorXd& state) const {
        nn::Tape t;
        auto refs = nn::bind_params(t, params_, false);
        return t.val(q_net_.forward(t, t.constant(Mat(state)), refs)).col(0);
    }

    void observe(TransitionTuple t) override { buffer_.push(std::move(t)); }

    TrainLog train_if_due(long iteration) override {
        if (buffer_.size() < static_cast<size_t>(cfg_.batch_size)) return {};
        if (cfg_.train_every > 1 && iteration % cfg_.train_every != 0) return {};
        TrainLog log;
        log.trained = true;
        log.loss_g = train_step();
        return log;
    }

    double train_step() {
        auto idx = buffer_.sample_indices(cfg_.batch_size, batch_rng_);
        const int m = static_cast<int>(idx.size());
        const int S = static_cast<int>(buffer_[idx[0]].state.size());
        Mat states(S, m), next_states(S, m);
        std::vector<int> actions(m);
        Eigen::VectorXd targets(m);
        for (int i = 0; i < m; ++i) {
            const auto& tr = buffer_[idx[i]];
            states.col(i) = tr.state;
            next_states.col(i) = tr.next_state;
            actions[i] = tr.action;
            targets(i) = tr.reward;
        }
        {
            nn::Tape t;
            auto refs = nn::bind_params(t, target_params_, false);
            Mat q_next = t.val(q_net_.forward(t, t.constant(next_states), refs));
            for (int i = 0; i < m; ++i) targets(i) += cfg_.gamma * q_next.col(i).maxCoeff();
        }
        nn::Tape t;
        auto refs = nn::bind_params(t, params_, true);
        ValueRef loss = dqn_loss(t, q_net_, refs, states, actions, targets);
        double out = t.scalar(loss);
        t.backward(loss);
        opt_.step(params_, nn::collect_grads(t, params_));
        return out;
    }

    void sync_if_due(long iteration) override {
        if (iteration % cfg_.target_sync == 0) target_params_ = nn::clone_params(params_);
    }

    const nn::ParamSet* checkpoint_params() const override { return &params_; }
    void restore_params(const nn::ParamSet& ps) override {
        params_ = ps;
        target_params_ = nn::clone_params(ps);
    }

    nn::ParamSet& params() { return params_; }
    const nn::ParamSet& target_params() const { return target_params_; }
    const nn::Mlp& q_net() const { return q_net_; }
    ReplayBuffer& buffer() { return buffer_; }

private:
    AgentConfig cfg_;
    int n_actions_;
    ReplayBuffer buffer_;
    RngStream explore_rng_, batch_rng_;
    nn::Mlp q_net_;
    nn::ParamSet params_;
    nn::ParamSet target_params_;
    nn::Optimizer opt_;
};

// Static near-equal split; never trains.
class HardSlicingAgent : public Agent {
public:
    HardSlicingAgent(int action_index) : action_index_(action_index) {}

    std::string algo() const override { return "hard"; }
    int select_action(const Eigen::VectorXd&, double) override { return action_index_; }
    void observe(TransitionTuple) override {}
    TrainLog train_if_due(long) override { return {}; }
    void sync_if_due(long) override {}

private:
    int action_index_;
};

}  // namespace gddq::agents

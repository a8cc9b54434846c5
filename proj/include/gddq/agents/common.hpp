#pragma once

#include <Eigen/Core>
#include <string>

#include "gddq/common.hpp"
#include "gddq/nn/mlp.hpp"
#include "gddq/nn/nets.hpp"
#include "gddq/rng.hpp"

namespace gddq::agents {

// Maps raw utility J onto {+eta, 0, -eta} via thresholds c1 > c2.
struct ClippingRule {
    double c1 = 6.5;
    double c2 = 4.5;
    double eta = 1.0;
    bool enabled = true;

    void validate() const {
        if (!(c1 > c2)) throw ConfigError("clipping needs c1 > c2");
        if (!(eta > 0)) throw ConfigError("clipping needs eta > 0");
    }
};

inline double clip_reward(double j, const ClippingRule& rule) {
    if (j >= rule.c1) return rule.eta;
    if (j <= rule.c2) return -rule.eta;
    return 0.0;
}

struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    long steps = 3000;

    double at(long t) const {
        if (steps <= 0 || t >= steps) return end;
        if (t < 0) return start;
        return start + (end - start) * static_cast<double>(t) / static_cast<double>(steps);
    }
};

struct AgentConfig {
    std::string algo = "gan_ddqn";  // gan_ddqn | dueling | dqn | hard
    double gamma = 0.9;
    int batch_size = 32;        // m
    long train_every = 50;      // K
    long target_sync = 200;     // C
    int n_critic = 5;
    double lambda_gp = 10.0;
    int particles = 32;         // N
    size_t buffer = 2000;
    double lr_g = 1e-3;
    double lr_d = 1e-3;
    double clip_norm = 10.0;
    EpsilonSchedule epsilon;
    ClippingRule clip;
    // network sizes
    int embed_width = 64;
    std::vector<int> trunk_widths = {128, 64};
    std::vector<int> disc_hidden = {64, 64};
    std::vector<int> dqn_hidden = {128, 64};
    bool cosine_embedding = false;

    void validate() const {
        if (!(gamma > 0 && gamma < 1)) throw ConfigError("gamma must be in (0,1)");
        if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
        if (static_cast<size_t>(batch_size) > buffer)
            throw ConfigError("batch_size must not exceed buffer capacity");
        if (n_critic < 1) throw ConfigError("n_critic must be >= 1");
        if (particles < 1) throw ConfigError("particles must be >= 1");
        if (lambda_gp < 0) throw ConfigError("lambda_gp must be >= 0");
        if (clip.enabled) clip.validate();
    }
};

// argmax with ties broken by the lowest index
inline int argmax_lowest(const Eigen::VectorXd& q) {
    int best = 0;
    for (int i = 1; i < q.size(); ++i)
        if (q(i) > q(best)) best = i;
    return best;
}

// y = r + gamma * particles of the greedy (by mean) action
inline Eigen::VectorXd bellman_target_particles(double reward, double gamma,
                                                const nn::ParticleSet& target_out) {
    if (!std::isfinite(reward)) throw NumericalError("non-finite reward");
    Eigen::VectorXd means = target_out.values.rowwise().mean();
    int a_star = argmax_lowest(means);
    return (gamma * target_out.values.row(a_star).transpose()).array() + reward;
}

struct TrainLog {
    bool trained = false;
    double loss_d = 0;
    double loss_g = 0;
};

// Allocation policy driven by the harness loop. Agents own their buffer and
// RNG substreams; evaluation with epsilon = 0 is deterministic.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string algo() const = 0;
    virtual int select_action(const Eigen::VectorXd& state, double epsilon) = 0;
    virtual void observe(TransitionTuple t) = 0;
    virtual TrainLog train_if_due(long iteration) = 0;
    virtual void sync_if_due(long iteration) = 0;
    // network to checkpoint; nullptr for non-learning agents
    virtual const nn::ParamSet* checkpoint_params() const { return nullptr; }
    virtual void restore_params(const nn::ParamSet&) {
        throw ConfigError("this agent has no parameters to restore");
    }
};

}  // namespace gddq::agents

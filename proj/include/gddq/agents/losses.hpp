#pragma once

#include <vector>

#include "gddq/nn/nets.hpp"
#include "gddq/nn/tape.hpp"

namespace gddq::agents {

using nn::Mat;
using nn::Tape;
using nn::ValueRef;

// Minibatch view shared by the GAN-DDQN losses. All targets are constants
// (already computed from the target network); taus hold N entries per
// transition, column-blocked.
struct GanBatch {
    Mat states;                // state_dim x m
    Mat taus;                  // 1 x (m*N)
    std::vector<int> actions;  // m
    Mat targets;               // y, 1 x (m*N)
    Mat x_hat;                 // interpolates, 1 x (m*N)
    int particles = 1;         // N
};

// L_D = E[D(G^(a)(s,tau))] - E[D(y)] + gp_coeff * E[(|dD/dx_hat| - 1)^2]
inline ValueRef gan_d_loss(Tape& t, const nn::QuantileGenerator& gen,
                           const std::vector<ValueRef>& gen_refs,
                           const nn::Discriminator& disc,
                           const std::vector<ValueRef>& disc_refs,
                           const GanBatch& b, double gp_coeff) {
    ValueRef particles = gen.forward(t, b.states, b.taus, gen_refs);
    ValueRef gen_sel = t.gather_rows(particles, b.actions, b.particles);
    ValueRef d_gen = t.mean_all(disc.forward(t, gen_sel, disc_refs));
    ValueRef d_real = t.mean_all(disc.forward(t, t.constant(b.targets), disc_refs));
    ValueRef gp = disc.gradient_penalty(t, b.x_hat, gp_coeff, disc_refs);
    return t.add(t.sub(d_gen, d_real), gp);
}

// L_G = -E[D(G^(a)(s,tau))]
inline ValueRef gan_g_loss(Tape& t, const nn::QuantileGenerator& gen,
                           const std::vector<ValueRef>& gen_refs,
                           const nn::Discriminator& disc,
                           const std::vector<ValueRef>& disc_refs,
                           const GanBatch& b) {
    ValueRef particles = gen.forward(t, b.states, b.taus, gen_refs);
    ValueRef gen_sel = t.gather_rows(particles, b.actions, b.particles);
    return t.scale(t.mean_all(disc.forward(t, gen_sel, disc_refs)), -1.0);
}

// Dueling critic batch: state-value particles against bootstrapped targets.
struct DuelCriticBatch {
    Mat states;   // state_dim x m
    Mat taus;     // 1 x (m*N)
    Mat targets;  // y_hat = r + gamma * target V-particles, 1 x (m*N)
    Mat x_hat;    // 1 x (m*N)
};

// L_D = E[D(G_v(s,tau))] - E[D(r + gamma Ghat_v(s',tau))] + gp
inline ValueRef duel_d_loss(Tape& t, const nn::DuelingGenerator& gen,
                            const std::vector<ValueRef>& gen_refs,
                            const nn::Discriminator& disc,
                            const std::vector<ValueRef>& disc_refs,
                            const DuelCriticBatch& b, double gp_coeff) {
    auto out = gen.forward(t, b.states, b.taus, gen_refs);
    ValueRef d_est = t.mean_all(disc.forward(t, out.value_particles, disc_refs));
    ValueRef d_tgt = t.mean_all(disc.forward(t, t.constant(b.targets), disc_refs));
    ValueRef gp = disc.gradient_penalty(t, b.x_hat, gp_coeff, disc_refs);
    return t.add(t.sub(d_est, d_tgt), gp);
}

struct DuelActorBatch {
    Mat states;                 // state_dim x m
    Mat taus;                   // 1 x (m*N)
    std::vector<int> actions;   // m
    Eigen::VectorXd q_targets;  // Q_hat per transition, m
    int particles = 1;
};

// L_G = -E[D(G_v(s,tau))] + 1/2 E[(Q_hat - Q)^2],
// Q = mean_tau G_v(s,tau) + G_ad^(a)(s). The adversarial term can be turned
// off to train the TD head alone.
inline ValueRef duel_g_loss(Tape& t, const nn::DuelingGenerator& gen,
                            const std::vector<ValueRef>& gen_refs,
                            const nn::Discriminator& disc,
                            const std::vector<ValueRef>& disc_refs,
                            const DuelActorBatch& b, bool adversarial = true) {
    auto out = gen.forward(t, b.states, b.taus, gen_refs);
    ValueRef v_mean = t.mean_pool_cols(out.value_particles, b.particles);  // 1 x m
    ValueRef adv_sel = t.gather_rows(out.advantages, b.actions, 1);        // 1 x m
    ValueRef q = t.add(v_mean, adv_sel);
    ValueRef td = t.scale(
        t.mean_all(t.square(t.sub(t.constant(b.q_targets.transpose()), q))), 0.5);
    if (!adversarial) return td;
    ValueRef d_est = t.mean_all(disc.forward(t, out.value_particles, disc_refs));
    return t.add(t.scale(d_est, -1.0), td);
}

// squared TD error for the DQN baseline: E[(r + gamma max_a' Qhat - Q(s,a))^2]
inline ValueRef dqn_loss(Tape& t, const nn::Mlp& q_net,
                         const std::vector<ValueRef>& refs, const Mat& states,
                         const std::vector<int>& actions,
                         const Eigen::VectorXd& targets) {
    ValueRef q_all = q_net.forward(t, t.constant(states), refs);
    ValueRef q_sel = t.gather_rows(q_all, actions, 1);
    return t.mean_all(t.square(t.sub(t.constant(targets.transpose()), q_sel)));
}

}  // namespace gddq::agents

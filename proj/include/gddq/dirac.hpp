#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gddq/common.hpp"

namespace gddq::dirac {

// Toy GAN with a point-mass generator (position theta), a linear
// discriminator D(x) = psi * x, and real data at xi.

// training objective psi*theta - xi*psi
inline double dirac_loss(double theta, double psi, double xi) {
    return psi * theta - xi * psi;
}

// gradient penalty (lambda/2)(|psi| - 1)^2
inline double dirac_penalty(double psi, double lambda) {
    if (lambda < 0) throw ConfigError("lambda must be >= 0");
    double d = std::abs(psi) - 1.0;
    return 0.5 * lambda * d * d;
}

inline double sign0(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// (-psi, theta - xi + sign(psi) lambda (|psi| - 1)), with sign(0) = 0 so the
// Nash point (xi, 0) is an exact fixed point of the discrete dynamics.
inline std::pair<double, double> vector_field(double theta, double psi, double xi,
                                              double lambda) {
    double v_theta = -psi;
    double v_psi = theta - xi + sign0(psi) * lambda * (std::abs(psi) - 1.0);
    return {v_theta, v_psi};
}

enum class UpdateMode { Alternating, Simultaneous };

struct DiracConfig {
    std::vector<std::pair<long, double>> xi_schedule = {{0, 1.0}};  // (step, xi)
    double h = 0.01;
    double lambda = 10.0;
    long steps = 1;
    double theta0 = 0.0;
    double psi0 = 0.0;
    UpdateMode update_mode = UpdateMode::Alternating;
    int disc_steps_per_gen = 1;  // discriminator updates per iteration

    void validate() const {
        if (h <= 0) throw ConfigError("h must be > 0");
        if (steps < 1) throw ConfigError("steps must be >= 1");
        if (lambda < 0) throw ConfigError("lambda must be >= 0");
        if (disc_steps_per_gen < 1) throw ConfigError("disc_steps_per_gen must be >= 1");
        if (xi_schedule.empty()) throw ConfigError("xi_schedule must not be empty");
        for (size_t i = 1; i < xi_schedule.size(); ++i)
            if (xi_schedule[i].first <= xi_schedule[i - 1].first)
                throw ConfigError("xi_schedule steps must be strictly increasing");
    }
};

struct DiracTrajectory {
    struct Point {
        long step;
        double theta, psi;
    };
    std::vector<Point> points;                       // steps + 1 entries
    std::vector<std::pair<long, double>> events;     // applied xi changes
    std::vector<double> xi_at;                       // xi in effect per recorded point
};

// Iterates theta += h*v_theta, psi += h*v_psi. Alternating applies the
// discriminator update(s) first and lets the generator see the new psi.
inline DiracTrajectory simulate(const DiracConfig& cfg) {
    cfg.validate();
    DiracTrajectory traj;
    double theta = cfg.theta0, psi = cfg.psi0;
    size_t sched = 0;
    double xi = cfg.xi_schedule[0].second;
    traj.points.push_back({0, theta, psi});
    traj.xi_at.push_back(xi);
    for (long k = 0; k < cfg.steps; ++k) {
        while (sched < cfg.xi_schedule.size() && cfg.xi_schedule[sched].first <= k) {
            if (xi != cfg.xi_schedule[sched].second || k == 0) {
                xi = cfg.xi_schedule[sched].second;
                if (k > 0) traj.events.push_back({k, xi});
            }
            ++sched;
        }
        if (cfg.update_mode == UpdateMode::Simultaneous) {
            auto [vt, vp] = vector_field(theta, psi, xi, cfg.lambda);
            theta += cfg.h * vt;
            psi += cfg.h * vp;
        } else {
            for (int d = 0; d < cfg.disc_steps_per_gen; ++d) {
                auto [vt_unused, vp] = vector_field(theta, psi, xi, cfg.lambda);
                (void)vt_unused;
                psi += cfg.h * vp;
            }
            auto [vt, vp_unused] = vector_field(theta, psi, xi, cfg.lambda);
            (void)vp_unused;
            theta += cfg.h * vt;
        }
        traj.points.push_back({k + 1, theta, psi});
        traj.xi_at.push_back(xi);
    }
    return traj;
}

inline constexpr long kNotReconverged = -1;

// Steps after the xi change until theta first enters [xi_new - band,
// xi_new + band] and stays there for `dwell` consecutive recorded steps.
// Returns kNotReconverged when that never happens.
inline long steps_to_reconverge(const DiracTrajectory& traj, double xi_new, double band,
                                long dwell = 100) {
    if (band <= 0) throw ConfigError("band must be > 0");
    long change_step = traj.events.empty() ? 0 : traj.events.back().first;
    long inside = 0;
    long entered = kNotReconverged;
    for (const auto& p : traj.points) {
        if (p.step < change_step) continue;
        if (std::abs(p.theta - xi_new) <= band) {
            if (inside == 0) entered = p.step - change_step;
            ++inside;
            if (inside >= dwell) return entered;
        } else {
            inside = 0;
            entered = kNotReconverged;
        }
    }
    return kNotReconverged;
}

}  // namespace gddq::dirac

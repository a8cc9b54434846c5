#pragma once

#include <cmath>
#include <vector>

#include "gddq/common.hpp"
#include "gddq/rng.hpp"

namespace gddq {

struct ChannelParams {
    double cell_radius_m = 40.0;
    double pathloss_exponent = 2.0;
    double pathloss_ref_db = 20.0;   // at 1 m
    double shadowing_sigma_db = 4.0; // lognormal, fixed per user per run
    double tx_power_w = 1.0;
    double noise_psd_w_hz = 3.9810717055349695e-21;  // -174 dBm/Hz
    bool rayleigh = true;

    void validate() const {
        if (noise_psd_w_hz <= 0) throw ConfigError("noise_psd must be > 0");
        if (tx_power_w <= 0) throw ConfigError("tx_power must be > 0");
        if (cell_radius_m <= 0) throw ConfigError("cell_radius must be > 0");
    }
};

inline double pathloss_db(const ChannelParams& ch, double distance_m) {
    double d = std::max(distance_m, 1.0);
    return ch.pathloss_ref_db + 10.0 * ch.pathloss_exponent * std::log10(d);
}

// Large-scale gain (path loss + shadowing) for one user, drawn once per run.
inline double draw_user_gain(const ChannelParams& ch, RngStream& rng) {
    // uniform position in the disk
    double r = ch.cell_radius_m * std::sqrt(rng.uniform());
    rng.uniform();  // angle; irrelevant for a single BS but kept in the stream
    double shadow_db = rng.normal(0.0, ch.shadowing_sigma_db);
    return std::pow(10.0, -(pathloss_db(ch, r) + shadow_db) / 10.0);
}

// SNR = g P / (N0 w), with g = large-scale gain x per-slot fading gain.
inline double snr(double gain, double tx_power_w, double noise_psd_w_hz, double bandwidth_hz) {
    if (bandwidth_hz <= 0) throw ConfigError("snr: bandwidth must be > 0");
    return gain * tx_power_w / (noise_psd_w_hz * bandwidth_hz);
}

// Shannon rate in bits/s, base-2 log.
inline double link_rate(double bandwidth_hz, double snr_linear) {
    if (bandwidth_hz <= 0.0) return 0.0;
    return bandwidth_hz * std::log2(1.0 + snr_linear);
}

}  // namespace gddq

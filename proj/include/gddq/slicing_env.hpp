#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "gddq/actions.hpp"
#include "gddq/channel.hpp"
#include "gddq/common.hpp"
#include "gddq/rng.hpp"
#include "gddq/traffic.hpp"

namespace gddq {

enum class SliceId { VoLTE, Video, URLLC };

inline std::string slice_id_to_string(SliceId id) {
    switch (id) {
        case SliceId::VoLTE: return "volte";
        case SliceId::Video: return "video";
        case SliceId::URLLC: return "urllc";
    }
    return "?";
}

inline SliceId slice_id_from_string(const std::string& s) {
    if (s == "volte") return SliceId::VoLTE;
    if (s == "video") return SliceId::Video;
    if (s == "urllc") return SliceId::URLLC;
    throw ConfigError("unknown slice id: " + s);
}

struct SliceSpec {
    SliceId id = SliceId::VoLTE;
    int user_count = 1;
    TrafficDistribution interarrival_ms;   // per user
    TrafficDistribution packet_size_bytes;
    double sla_rate_bps = 1.0;   // r_bar
    double sla_latency_s = 1.0;  // l_bar
    double beta = 1.0;           // SSR weight

    void validate() const {
        if (user_count < 1) throw ConfigError("slice needs at least one user");
        if (sla_rate_bps <= 0) throw ConfigError("sla_rate must be > 0");
        if (sla_latency_s <= 0) throw ConfigError("sla_latency must be > 0");
        if (beta < 0) throw ConfigError("beta must be >= 0");
    }
};

struct Packet {
    double size_bits = 0;
    double remaining_bits = 0;
    double arrival_s = 0;
    double deadline_s = 0;
    bool rate_violated = false;  // some serving slot had r < r_bar
};

struct Observation {
    std::vector<long> arrived;       // d_n, per slice
    std::vector<double> normalized;  // d_n / scale, clamped to [0,1]
};

struct StepMetrics {
    double se = 0;  // bits/s/Hz
    std::vector<double> ssr;
    double utility = 0;
    double delivered_bits = 0;
    std::vector<long> dropped_packets;
    // conservation bookkeeping, per slice, for this step
    std::vector<long> arrived;
    std::vector<long> delivered_ok;
    std::vector<long> delivered_failed;  // late and/or under-rate
    std::vector<long> queued_delta;
};

// Per-packet audit record, collected only when audit mode is on.
struct PacketAudit {
    int slice = 0;
    double arrival_s = 0, delivery_s = 0, deadline_s = 0;
    bool rate_ok = false, counted_ok = false;
};

inline double slice_ssr(long delivered_ok, long total_arrived) {
    if (delivered_ok < 0 || total_arrived < 0 || delivered_ok > total_arrived)
        throw ConfigError("slice_ssr: need 0 <= delivered_ok <= total_arrived");
    if (total_arrived == 0) return 1.0;
    return static_cast<double>(delivered_ok) / static_cast<double>(total_arrived);
}

inline double system_utility(double se, const std::vector<double>& ssr,
                             double alpha, const std::vector<double>& beta) {
    if (ssr.size() != beta.size()) throw ConfigError("system_utility: ssr/beta length mismatch");
    double j = alpha * se;
    for (size_t i = 0; i < ssr.size(); ++i) j += beta[i] * ssr[i];
    return j;
}

// Time-average over slots of (sum of scheduled users' link rates) / W.
inline double spectrum_efficiency(const std::vector<double>& slot_sum_rates, double total_bandwidth_hz) {
    if (slot_sum_rates.empty()) return 0.0;
    double acc = 0;
    for (double r : slot_sum_rates) acc += r;
    return acc / (static_cast<double>(slot_sum_rates.size()) * total_bandwidth_hz);
}

struct EnvConfig {
    std::vector<SliceSpec> slices;
    ChannelParams channel;
    double total_bandwidth_hz = 10e6;
    double resolution_hz = 1e6;
    double alpha = 0.01;
    double slot_s = 0.5e-3;
    int slots_per_step = 2000;
    std::uint64_t seed = 1;
    std::vector<double> norm_scale;  // per-slice observation divisor; empty = raw counts
};

// Downlink base station serving one queue per user, round-robin one user per
// slot within each slice. Strictly sequential; owns all of its RNG streams.
class Environment {
public:
    explicit Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.slices.empty()) throw ConfigError("need at least one slice");
        cfg_.channel.validate();
        for (const auto& s : cfg_.slices) s.validate();
        check_divisible(cfg_.total_bandwidth_hz, cfg_.resolution_hz);
        actions_ = enumerate_actions(cfg_.total_bandwidth_hz, cfg_.resolution_hz,
                                     static_cast<int>(cfg_.slices.size()));

        SeedTree seeds(cfg_.seed);
        auto topo = seeds.stream("env/topology");
        slices_.resize(cfg_.slices.size());
        delivered_bits_step_.assign(cfg_.slices.size(), 0.0);
        for (size_t n = 0; n < cfg_.slices.size(); ++n) {
            auto& st = slices_[n];
            st.traffic_rng = seeds.stream("env/traffic", static_cast<int>(n));
            st.fading_rng = seeds.stream("env/fading", static_cast<int>(n));
            st.users.resize(cfg_.slices[n].user_count);
            for (auto& u : st.users) {
                u.gain = draw_user_gain(cfg_.channel, topo);
                u.next_arrival_s = sample_interarrival(n, st.traffic_rng);
            }
        }
    }

    const std::vector<Action>& action_table() const { return actions_; }
    const EnvConfig& config() const { return cfg_; }
    int n_slices() const { return static_cast<int>(cfg_.slices.size()); }
    double now() const { return now_s_; }

    void set_norm_scale(std::vector<double> scale) { cfg_.norm_scale = std::move(scale); }

    void enable_audit(bool on) { audit_on_ = on; }
    const std::vector<PacketAudit>& audit_log() const { return audit_; }

    double user_gain(int slice, int user) const { return slices_[slice].users[user].gain; }

    std::pair<Observation, StepMetrics> step(const Action& action) {
        validate_action(action);
        const int S = n_slices();
        StepMetrics m;
        m.ssr.assign(S, 0.0);
        m.dropped_packets.assign(S, 0);
        m.arrived.assign(S, 0);
        m.delivered_ok.assign(S, 0);
        m.delivered_failed.assign(S, 0);
        m.queued_delta.assign(S, 0);

        std::vector<long> q_before(S);
        for (int n = 0; n < S; ++n) q_before[n] = queued_packets(n);

        auto alloc = action.allocation_hz();
        std::vector<double> slot_rates;
        slot_rates.reserve(cfg_.slots_per_step);

        for (int slot = 0; slot < cfg_.slots_per_step; ++slot) {
            double slot_start = now_s_;
            double slot_end = now_s_ + cfg_.slot_s;
            generate_arrivals_until(slot_start, m.arrived);

            double sum_rate = 0;
            for (int n = 0; n < S; ++n)
                sum_rate += serve_slice(n, alloc[n], slot_start, m);
            slot_rates.push_back(sum_rate);
            now_s_ = slot_end;
        }
        // arrivals in the last slot belong to this window
        generate_arrivals_until(now_s_, m.arrived);

        m.se = spectrum_efficiency(slot_rates, cfg_.total_bandwidth_hz);
        std::vector<double> beta(S);
        for (int n = 0; n < S; ++n) {
            beta[n] = cfg_.slices[n].beta;
            long ok = std::min<long>(m.delivered_ok[n], m.arrived[n]);
            m.ssr[n] = slice_ssr(ok, m.arrived[n]);
            m.queued_delta[n] = queued_packets(n) - q_before[n];
            m.delivered_bits += delivered_bits_step_[n];
        }
        m.utility = system_utility(m.se, m.ssr, cfg_.alpha, beta);
        std::fill(delivered_bits_step_.begin(), delivered_bits_step_.end(), 0.0);

        Observation obs;
        obs.arrived = m.arrived;
        obs.normalized.resize(S);
        for (int n = 0; n < S; ++n) {
            double scale = (n < static_cast<int>(cfg_.norm_scale.size()) && cfg_.norm_scale[n] > 0)
                               ? cfg_.norm_scale[n]
                               : 1.0;
            obs.normalized[n] = std::clamp(static_cast<double>(m.arrived[n]) / scale, 0.0, 1.0);
        }
        return {std::move(obs), std::move(m)};
    }

private:
    struct UserState {
        double gain = 0;
        double next_arrival_s = 0;
        std::deque<Packet> queue;
    };
    struct SliceState {
        std::vector<UserState> users;
        RngStream traffic_rng;
        RngStream fading_rng;
        int rr_pointer = 0;  // persists across slots and steps
    };

    void validate_action(const Action& action) const {
        if (action.units.size() != cfg_.slices.size())
            throw ConfigError("action has wrong slice count");
        long long sum = 0;
        for (int u : action.units) {
            if (u < 1) throw ConfigError("action allocates zero bandwidth to a slice");
            sum += u;
        }
        long long total_units = std::llround(cfg_.total_bandwidth_hz / cfg_.resolution_hz);
        if (sum != total_units) throw ConfigError("action does not sum to the total bandwidth");
        if (std::abs(action.resolution_hz - cfg_.resolution_hz) > 1e-9)
            throw ConfigError("action resolution mismatch");
    }

    double sample_interarrival(size_t slice, RngStream& rng) {
        return cfg_.slices[slice].interarrival_ms.sample(rng) * 1e-3;
    }

    void generate_arrivals_until(double t, std::vector<long>& arrived) {
        for (size_t n = 0; n < slices_.size(); ++n) {
            auto& st = slices_[n];
            for (auto& u : st.users) {
                while (u.next_arrival_s < t) {
                    Packet p;
                    p.size_bits = cfg_.slices[n].packet_size_bytes.sample(st.traffic_rng) * 8.0;
                    p.remaining_bits = p.size_bits;
                    p.arrival_s = u.next_arrival_s;
                    p.deadline_s = p.arrival_s + cfg_.slices[n].sla_latency_s;
                    u.queue.push_back(p);
                    arrived[n] += 1;
                    u.next_arrival_s += sample_interarrival(n, st.traffic_rng);
                }
            }
        }
    }

    long queued_packets(int slice) const {
        long q = 0;
        for (const auto& u : slices_[slice].users) q += static_cast<long>(u.queue.size());
        return q;
    }

    // Serves one slice for one slot; returns the scheduled user's link rate.
    double serve_slice(int n, double bandwidth_hz, double slot_start, StepMetrics& m) {
        auto& st = slices_[n];
        const auto& spec = cfg_.slices[n];

        // expire queued packets that can no longer meet their deadline
        for (auto& u : st.users) {
            while (!u.queue.empty() && u.queue.front().deadline_s <= slot_start) {
                record_audit(n, u.queue.front(), slot_start, false, false);
                u.queue.pop_front();
                m.dropped_packets[n] += 1;
            }
        }

        // round-robin pick among users with backlog
        const int U = static_cast<int>(st.users.size());
        int picked = -1;
        for (int k = 0; k < U; ++k) {
            int idx = (st.rr_pointer + k) % U;
            if (!st.users[idx].queue.empty()) {
                picked = idx;
                break;
            }
        }
        if (picked < 0) return 0.0;
        st.rr_pointer = (picked + 1) % U;

        auto& user = st.users[picked];
        double fade = cfg_.channel.rayleigh ? st.fading_rng.exp_unit() : 1.0;
        double s = snr(user.gain * fade, cfg_.channel.tx_power_w,
                       cfg_.channel.noise_psd_w_hz, bandwidth_hz);
        double rate = link_rate(bandwidth_hz, s);
        if (rate <= 0.0) return 0.0;

        bool rate_ok_this_slot = rate >= spec.sla_rate_bps;
        double budget_s = cfg_.slot_s;
        while (!user.queue.empty() && budget_s > 0.0) {
            Packet& p = user.queue.front();
            if (!rate_ok_this_slot) p.rate_violated = true;
            double need_s = p.remaining_bits / rate;
            if (need_s > budget_s) {
                p.remaining_bits -= rate * budget_s;
                budget_s = 0.0;
                break;
            }
            budget_s -= need_s;
            double delivery_s = slot_start + (cfg_.slot_s - budget_s);
            bool ok = !p.rate_violated && delivery_s <= p.deadline_s;
            record_audit(n, p, delivery_s, !p.rate_violated, ok);
            if (ok)
                m.delivered_ok[n] += 1;
            else
                m.delivered_failed[n] += 1;
            delivered_bits_step_[n] += p.size_bits;
            user.queue.pop_front();
        }
        return rate;
    }

    void record_audit(int slice, const Packet& p, double delivery_s, bool rate_ok, bool ok) {
        if (!audit_on_) return;
        audit_.push_back({slice, p.arrival_s, delivery_s, p.deadline_s, rate_ok, ok});
    }

    EnvConfig cfg_;
    std::vector<Action> actions_;
    std::vector<SliceState> slices_;
    double now_s_ = 0;
    bool audit_on_ = false;
    std::vector<PacketAudit> audit_;
    std::vector<double> delivered_bits_step_;
};

}  // namespace gddq

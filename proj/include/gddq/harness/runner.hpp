#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <memory>
#include <numeric>
#include <optional>

#include "gddq/agents/agents.hpp"
#include "gddq/harness/config.hpp"
#include "gddq/harness/metrics.hpp"
#include "gddq/nn/checkpoint.hpp"

namespace gddq::harness {

struct RunSummary {
    std::string algo;
    std::uint64_t seed = 0;
    long iterations = 0;
    long eval_window = 0;
    double mean_utility_last_window = 0;
    double mean_se_last_window = 0;
    std::vector<double> mean_ssr_last_window;
    double mean_utility_all = 0;
    json env_echo;  // resolved env config for compare()
};

struct RunResult {
    RunSummary summary;
    std::vector<MetricsRow> rows;
    std::vector<double> norm_scale;
    std::optional<nn::ParamSet> checkpoint;
};

inline Eigen::VectorXd to_state(const Observation& obs) {
    Eigen::VectorXd v(obs.normalized.size());
    for (size_t i = 0; i < obs.normalized.size(); ++i) v(i) = obs.normalized[i];
    return v;
}

// 99th percentile of per-slice arrivals over a hard-slicing warm-up; fixes
// the observation normalization for the run.
inline std::vector<double> fit_norm_scale(const ExperimentConfig& cfg) {
    EnvConfig env_cfg = cfg.env;
    env_cfg.seed = SeedTree(cfg.seed).stream("warmup/env").next_u64();
    Environment env(env_cfg);
    Action hard = hard_slice_action(env.n_slices(), env_cfg.total_bandwidth_hz,
                                    env_cfg.resolution_hz);
    hard.index = agents::find_action_index(env.action_table(), hard.units);
    std::vector<std::vector<long>> counts(env.n_slices());
    for (long t = 0; t < cfg.norm_warmup_steps; ++t) {
        auto [obs, m] = env.step(hard);
        for (int n = 0; n < env.n_slices(); ++n) counts[n].push_back(obs.arrived[n]);
    }
    std::vector<double> scale(env.n_slices());
    for (int n = 0; n < env.n_slices(); ++n) {
        auto& v = counts[n];
        std::sort(v.begin(), v.end());
        size_t k = static_cast<size_t>(0.99 * (v.size() - 1));
        scale[n] = std::max<double>(1.0, static_cast<double>(v[k]));
    }
    return scale;
}

// The observe -> act -> utility -> clip -> store -> train loop.
// Deterministic given (config, seed).
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    SeedTree seeds(cfg.seed);

    EnvConfig env_cfg = cfg.env;
    env_cfg.seed = seeds.stream("env").next_u64();
    if (env_cfg.norm_scale.empty()) env_cfg.norm_scale = fit_norm_scale(cfg);
    Environment env(env_cfg);

    auto agent = agents::make_agent(cfg.agent, env.n_slices(), env.action_table(),
                                    env_cfg.total_bandwidth_hz, env_cfg.resolution_hz, seeds);

    // bootstrap state: one unlogged hard-slicing step
    Action hard = hard_slice_action(env.n_slices(), env_cfg.total_bandwidth_hz,
                                    env_cfg.resolution_hz);
    hard.index = agents::find_action_index(env.action_table(), hard.units);
    Eigen::VectorXd state = to_state(env.step(hard).first);

    RunResult result;
    result.norm_scale = env_cfg.norm_scale;
    result.rows.reserve(cfg.iterations);
    const double step_ms = env_cfg.slot_s * env_cfg.slots_per_step * 1e3;

    for (long t = 0; t < cfg.iterations; ++t) {
        agent->sync_if_due(t);
        double eps = cfg.agent.algo == "hard" ? 0.0 : cfg.agent.epsilon.at(t);
        int a = agent->select_action(state, eps);
        auto [obs, m] = env.step(env.action_table()[a]);
        Eigen::VectorXd next_state = to_state(obs);

        double reward = cfg.agent.clip.enabled ? agents::clip_reward(m.utility, cfg.agent.clip)
                                               : m.utility;
        agent->observe({state, a, reward, next_state});
        agents::TrainLog train = agent->train_if_due(t);

        MetricsRow row;
        row.iteration = t;
        row.utility_raw = m.utility;
        row.reward_clipped = reward;
        row.se = m.se;
        row.ssr_volte = m.ssr.size() > 0 ? m.ssr[0] : 0;
        row.ssr_video = m.ssr.size() > 1 ? m.ssr[1] : 0;
        row.ssr_urllc = m.ssr.size() > 2 ? m.ssr[2] : 0;
        row.epsilon = eps;
        if (train.trained) {
            row.loss_d = train.loss_d;
            row.loss_g = train.loss_g;
        }
        row.action_index = a;
        row.wallclock_ms = static_cast<double>(t + 1) * step_ms;
        result.rows.push_back(row);

        state = std::move(next_state);
    }

    auto& s = result.summary;
    s.algo = cfg.agent.algo;
    s.seed = cfg.seed;
    s.iterations = cfg.iterations;
    s.eval_window = cfg.eval_window;
    s.env_echo = env_to_json(cfg.env);
    s.env_echo.erase("seed");
    long w0 = cfg.iterations - cfg.eval_window;
    double acc_u = 0, acc_se = 0;
    std::vector<double> acc_ssr(env.n_slices(), 0.0);
    double acc_all = 0;
    for (long t = 0; t < cfg.iterations; ++t) {
        acc_all += result.rows[t].utility_raw;
        if (t >= w0) {
            acc_u += result.rows[t].utility_raw;
            acc_se += result.rows[t].se;
            acc_ssr[0] += result.rows[t].ssr_volte;
            if (env.n_slices() > 1) acc_ssr[1] += result.rows[t].ssr_video;
            if (env.n_slices() > 2) acc_ssr[2] += result.rows[t].ssr_urllc;
        }
    }
    s.mean_utility_last_window = acc_u / cfg.eval_window;
    s.mean_se_last_window = acc_se / cfg.eval_window;
    s.mean_utility_all = acc_all / cfg.iterations;
    for (double v : acc_ssr) s.mean_ssr_last_window.push_back(v / cfg.eval_window);

    if (agent->checkpoint_params())
        result.checkpoint = nn::clone_params(*agent->checkpoint_params());
    return result;
}

inline json summary_to_json(const RunSummary& s) {
    return json{{"algo", s.algo},
                {"seed", s.seed},
                {"iterations", s.iterations},
                {"eval_window", s.eval_window},
                {"mean_utility_last_window", s.mean_utility_last_window},
                {"mean_se_last_window", s.mean_se_last_window},
                {"mean_ssr_last_window", s.mean_ssr_last_window},
                {"mean_utility_all", s.mean_utility_all},
                {"env", s.env_echo}};
}

inline RunSummary summary_from_json(const json& j) {
    RunSummary s;
    s.algo = j.at("algo").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.iterations = j.at("iterations").get<long>();
    s.eval_window = j.at("eval_window").get<long>();
    s.mean_utility_last_window = j.at("mean_utility_last_window").get<double>();
    s.mean_se_last_window = j.at("mean_se_last_window").get<double>();
    s.mean_ssr_last_window = j.at("mean_ssr_last_window").get<std::vector<double>>();
    s.mean_utility_all = j.at("mean_utility_all").get<double>();
    s.env_echo = j.at("env");
    return s;
}

// Writes metrics.csv, summary.json, config.json and checkpoint.gddq.
inline void write_run_outputs(const ExperimentConfig& cfg, const RunResult& result,
                              const std::string& dir, double elapsed_real_ms) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output dir: " + dir);
    write_metrics_csv(dir + "/metrics.csv", result.rows);
    {
        std::ofstream os(dir + "/summary.json");
        if (!os) throw IoError("cannot write summary.json");
        os << summary_to_json(result.summary).dump(2) << '\n';
    }
    {
        ExperimentConfig echo = cfg;
        echo.env.norm_scale = result.norm_scale;
        std::ofstream os(dir + "/config.json");
        if (!os) throw IoError("cannot write config.json");
        os << experiment_to_json(echo).dump(2) << '\n';
    }
    {
        std::ofstream os(dir + "/timing.json");
        os << json{{"elapsed_real_ms", elapsed_real_ms}}.dump(2) << '\n';
    }
    if (result.checkpoint)
        nn::save_checkpoint(*result.checkpoint, dir + "/checkpoint.gddq");
}

}  // namespace gddq::harness

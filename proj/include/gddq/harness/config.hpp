#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "gddq/agents/common.hpp"
#include "gddq/slicing_env.hpp"

namespace gddq::harness {

using json = nlohmann::json;

struct ExperimentConfig {
    EnvConfig env;
    agents::AgentConfig agent;
    long iterations = 5000;
    long eval_window = 500;
    std::uint64_t seed = 1;
    std::string output_dir = "runs/out";
    long norm_warmup_steps = 200;  // hard-slicing steps used to fit the state scale

    void validate() const {
        if (iterations < 1) throw ConfigError("iterations must be >= 1");
        if (eval_window < 1 || eval_window > iterations)
            throw ConfigError("eval_window must be in [1, iterations]");
        agent.validate();
    }
};

inline TrafficDistribution traffic_from_json(const json& j) {
    auto kind = TrafficDistribution::kind_from_string(j.at("kind").get<std::string>());
    return TrafficDistribution(kind, j.at("params").get<std::vector<double>>());
}

inline json traffic_to_json(const TrafficDistribution& d) {
    return json{{"kind", TrafficDistribution::kind_to_string(d.kind())},
                {"params", d.params()}};
}

inline EnvConfig env_from_json(const json& j) {
    EnvConfig cfg;
    cfg.total_bandwidth_hz = j.at("total_bandwidth_hz").get<double>();
    cfg.resolution_hz = j.at("resolution_hz").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.slot_s = j.at("slot_ms").get<double>() * 1e-3;
    cfg.slots_per_step = j.at("slots_per_step").get<int>();
    cfg.seed = j.value("seed", 1ull);
    const auto& ch = j.at("channel");
    cfg.channel.cell_radius_m = ch.value("cell_radius_m", 40.0);
    cfg.channel.pathloss_exponent = ch.value("pathloss_exponent", 2.0);
    cfg.channel.pathloss_ref_db = ch.value("pathloss_ref_db", 20.0);
    cfg.channel.shadowing_sigma_db = ch.value("shadowing_sigma_db", 4.0);
    cfg.channel.tx_power_w = ch.value("tx_power_w", 1.0);
    cfg.channel.noise_psd_w_hz = ch.value("noise_psd_w_hz", 3.9810717055349695e-21);
    cfg.channel.rayleigh = ch.value("rayleigh", true);
    for (const auto& js : j.at("slices")) {
        SliceSpec s;
        s.id = slice_id_from_string(js.at("id").get<std::string>());
        s.user_count = js.at("users").get<int>();
        s.interarrival_ms = traffic_from_json(js.at("interarrival"));
        s.packet_size_bytes = traffic_from_json(js.at("packet_size"));
        s.sla_rate_bps = js.at("sla_rate_bps").get<double>();
        s.sla_latency_s = js.at("sla_latency_ms").get<double>() * 1e-3;
        s.beta = js.value("beta", 1.0);
        cfg.slices.push_back(std::move(s));
    }
    if (j.contains("norm_scale")) cfg.norm_scale = j.at("norm_scale").get<std::vector<double>>();
    return cfg;
}

inline json env_to_json(const EnvConfig& cfg) {
    json j;
    j["total_bandwidth_hz"] = cfg.total_bandwidth_hz;
    j["resolution_hz"] = cfg.resolution_hz;
    j["alpha"] = cfg.alpha;
    j["slot_ms"] = cfg.slot_s * 1e3;
    j["slots_per_step"] = cfg.slots_per_step;
    j["seed"] = cfg.seed;
    j["channel"] = {{"cell_radius_m", cfg.channel.cell_radius_m},
                    {"pathloss_exponent", cfg.channel.pathloss_exponent},
                    {"pathloss_ref_db", cfg.channel.pathloss_ref_db},
                    {"shadowing_sigma_db", cfg.channel.shadowing_sigma_db},
                    {"tx_power_w", cfg.channel.tx_power_w},
                    {"noise_psd_w_hz", cfg.channel.noise_psd_w_hz},
                    {"rayleigh", cfg.channel.rayleigh}};
    j["slices"] = json::array();
    for (const auto& s : cfg.slices) {
        j["slices"].push_back({{"id", slice_id_to_string(s.id)},
                               {"users", s.user_count},
                               {"interarrival", traffic_to_json(s.interarrival_ms)},
                               {"packet_size", traffic_to_json(s.packet_size_bytes)},
                               {"sla_rate_bps", s.sla_rate_bps},
                               {"sla_latency_ms", s.sla_latency_s * 1e3},
                               {"beta", s.beta}});
    }
    if (!cfg.norm_scale.empty()) j["norm_scale"] = cfg.norm_scale;
    return j;
}

inline agents::AgentConfig agent_from_json(const json& j) {
    agents::AgentConfig cfg;
    cfg.algo = j.at("algo").get<std::string>();
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.train_every = j.value("train_every", cfg.train_every);
    cfg.target_sync = j.value("target_sync", cfg.target_sync);
    cfg.n_critic = j.value("n_critic", cfg.n_critic);
    cfg.lambda_gp = j.value("lambda_gp", cfg.lambda_gp);
    cfg.particles = j.value("particles", cfg.particles);
    cfg.buffer = j.value("buffer", cfg.buffer);
    cfg.lr_g = j.value("lr_g", cfg.lr_g);
    cfg.lr_d = j.value("lr_d", cfg.lr_d);
    cfg.clip_norm = j.value("clip_norm", cfg.clip_norm);
    if (j.contains("epsilon")) {
        cfg.epsilon.start = j["epsilon"].value("start", cfg.epsilon.start);
        cfg.epsilon.end = j["epsilon"].value("end", cfg.epsilon.end);
        cfg.epsilon.steps = j["epsilon"].value("steps", cfg.epsilon.steps);
    }
    if (j.contains("clip")) {
        cfg.clip.c1 = j["clip"].value("c1", cfg.clip.c1);
        cfg.clip.c2 = j["clip"].value("c2", cfg.clip.c2);
        cfg.clip.eta = j["clip"].value("eta", cfg.clip.eta);
        cfg.clip.enabled = j["clip"].value("enabled", cfg.clip.enabled);
    }
    cfg.embed_width = j.value("embed_width", cfg.embed_width);
    if (j.contains("trunk_widths")) cfg.trunk_widths = j["trunk_widths"].get<std::vector<int>>();
    if (j.contains("disc_hidden")) cfg.disc_hidden = j["disc_hidden"].get<std::vector<int>>();
    if (j.contains("dqn_hidden")) cfg.dqn_hidden = j["dqn_hidden"].get<std::vector<int>>();
    cfg.cosine_embedding = j.value("cosine_embedding", cfg.cosine_embedding);
    return cfg;
}

inline json agent_to_json(const agents::AgentConfig& cfg) {
    return json{{"algo", cfg.algo},
                {"gamma", cfg.gamma},
                {"batch_size", cfg.batch_size},
                {"train_every", cfg.train_every},
                {"target_sync", cfg.target_sync},
                {"n_critic", cfg.n_critic},
                {"lambda_gp", cfg.lambda_gp},
                {"particles", cfg.particles},
                {"buffer", cfg.buffer},
                {"lr_g", cfg.lr_g},
                {"lr_d", cfg.lr_d},
                {"clip_norm", cfg.clip_norm},
                {"epsilon", {{"start", cfg.epsilon.start},
                             {"end", cfg.epsilon.end},
                             {"steps", cfg.epsilon.steps}}},
                {"clip", {{"c1", cfg.clip.c1},
                          {"c2", cfg.clip.c2},
                          {"eta", cfg.clip.eta},
                          {"enabled", cfg.clip.enabled}}},
                {"embed_width", cfg.embed_width},
                {"trunk_widths", cfg.trunk_widths},
                {"disc_hidden", cfg.disc_hidden},
                {"dqn_hidden", cfg.dqn_hidden},
                {"cosine_embedding", cfg.cosine_embedding}};
}

inline ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.env = env_from_json(j.at("env"));
    cfg.agent = agent_from_json(j.at("agent"));
    cfg.iterations = j.at("iterations").get<long>();
    cfg.eval_window = j.value("eval_window", std::min<long>(500, cfg.iterations));
    cfg.seed = j.value("seed", cfg.env.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.norm_warmup_steps = j.value("norm_warmup_steps", cfg.norm_warmup_steps);
    cfg.validate();
    return cfg;
}

inline json experiment_to_json(const ExperimentConfig& cfg) {
    return json{{"env", env_to_json(cfg.env)},
                {"agent", agent_to_json(cfg.agent)},
                {"iterations", cfg.iterations},
                {"eval_window", cfg.eval_window},
                {"seed", cfg.seed},
                {"output_dir", cfg.output_dir},
                {"norm_warmup_steps", cfg.norm_warmup_steps}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace gddq::harness

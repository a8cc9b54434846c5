#pragma once

#include <memory>

#include "gddq/actions.hpp"
#include "gddq/agents/dqn.hpp"
#include "gddq/agents/dueling.hpp"
#include "gddq/agents/gan_ddqn.hpp"

namespace gddq::agents {

inline int find_action_index(const std::vector<Action>& table, const std::vector<int>& units) {
    for (const auto& a : table)
        if (a.units == units) return a.index;
    throw ConfigError("allocation not present in the action table");
}

inline std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, int state_dim,
                                         const std::vector<Action>& table,
                                         double total_bandwidth_hz, double resolution_hz,
                                         const SeedTree& seeds) {
    int n_actions = static_cast<int>(table.size());
    if (cfg.algo == "gan_ddqn")
        return std::make_unique<GanDdqnAgent>(cfg, state_dim, n_actions, seeds);
    if (cfg.algo == "dueling")
        return std::make_unique<DuelingAgent>(cfg, state_dim, n_actions, seeds);
    if (cfg.algo == "dqn")
        return std::make_unique<DqnAgent>(cfg, state_dim, n_actions, seeds);
    if (cfg.algo == "hard") {
        Action split = hard_slice_action(static_cast<int>(table[0].units.size()),
                                         total_bandwidth_hz, resolution_hz);
        return std::make_unique<HardSlicingAgent>(find_action_index(table, split.units));
    }
    throw ConfigError("unknown algo: " + cfg.algo);
}

}  // namespace gddq::agents

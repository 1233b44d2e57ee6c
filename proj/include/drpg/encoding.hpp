#pragma once

#include <span>
#include <vector>

#include "drpg/grid_env.hpp"
#include "drpg/mlp.hpp"

namespace drpg {

// Reusable buffers for network evaluations in hot loops.
struct Workspace {
  std::vector<double> input, hidden, output, up;
};

// Global-state encoding for centralized networks: every agent cell then every
// entity cell, coordinates divided by grid width, in index order.
int state_encoding_dim(int n_agents, int n_entities);
void state_encoding_into(const GridState& state, std::vector<double>& out);
std::vector<double> state_encoding(const GridState& state);

// State encoding followed by the one-hot joint action (kNumActions per agent).
int joint_input_dim(int n_agents, int n_entities);
void joint_input_into(const GridState& state, const JointAction& action,
                      std::vector<double>& out);
std::vector<double> joint_input(const GridState& state, const JointAction& action);

// State encoding followed by one agent's one-hot local action.
int local_input_dim(int n_agents, int n_entities);
void local_input_into(const GridState& state, int local_action, std::vector<double>& out);

double eval_scalar(const MlpParams& p, std::span<const double> input, Workspace& ws);

}  // namespace drpg

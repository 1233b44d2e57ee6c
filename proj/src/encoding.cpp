#include "drpg/encoding.hpp"

namespace drpg {

int state_encoding_dim(int n_agents, int n_entities) {
  return 2 * (n_agents + n_entities);
}

void state_encoding_into(const GridState& state, std::vector<double>& out) {
  out.clear();
  out.reserve(2 * (state.agent_cells.size() + state.entity_cells.size()));
  const double scale = 1.0 / state.width;
  for (const Cell& c : state.agent_cells) {
    out.push_back(c.row * scale);
    out.push_back(c.col * scale);
  }
  for (const Cell& c : state.entity_cells) {
    out.push_back(c.row * scale);
    out.push_back(c.col * scale);
  }
}

std::vector<double> state_encoding(const GridState& state) {
  std::vector<double> out;
  state_encoding_into(state, out);
  return out;
}

int joint_input_dim(int n_agents, int n_entities) {
  return state_encoding_dim(n_agents, n_entities) + kNumActions * n_agents;
}

void joint_input_into(const GridState& state, const JointAction& action,
                      std::vector<double>& out) {
  state_encoding_into(state, out);
  const std::size_t base = out.size();
  out.resize(base + kNumActions * action.actions.size(), 0.0);
  for (std::size_t i = 0; i < action.actions.size(); ++i)
    out[base + kNumActions * i + action.actions[i]] = 1.0;
}

std::vector<double> joint_input(const GridState& state, const JointAction& action) {
  std::vector<double> out;
  joint_input_into(state, action, out);
  return out;
}

int local_input_dim(int n_agents, int n_entities) {
  return state_encoding_dim(n_agents, n_entities) + kNumActions;
}

void local_input_into(const GridState& state, int local_action, std::vector<double>& out) {
  state_encoding_into(state, out);
  const std::size_t base = out.size();
  out.resize(base + kNumActions, 0.0);
  out[base + local_action] = 1.0;
}

double eval_scalar(const MlpParams& p, std::span<const double> input, Workspace& ws) {
  ws.output.resize(p.output_dim);
  forward(p, input, ws.output, ws.hidden);
  return ws.output[0];
}

}  // namespace drpg

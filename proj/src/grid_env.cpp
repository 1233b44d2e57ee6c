#include "drpg/grid_env.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "drpg/policy.hpp"

namespace drpg {

Cell moved_cell(const Cell& c, int action, int width, int height) {
  Cell n = c;
  switch (action) {
    case kUp:    n.row -= 1; break;
    case kDown:  n.row += 1; break;
    case kLeft:  n.col -= 1; break;
    case kRight: n.col += 1; break;
    case kStay:  break;
    default: throw std::invalid_argument("moved_cell: bad action " + std::to_string(action));
  }
  n.row = std::clamp(n.row, 0, height - 1);
  n.col = std::clamp(n.col, 0, width - 1);
  return n;
}

int manhattan(const Cell& a, const Cell& b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

int chebyshev(const Cell& a, const Cell& b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

Environment::Environment(EnvKind kind, int n_agents) : kind_(kind), n_agents_(n_agents) {
  if (n_agents < 2) throw std::invalid_argument("environment: need at least 2 agents");
  if (n_agents + n_entities() > width() * height())
    throw std::invalid_argument("environment: " + std::to_string(n_agents + n_entities()) +
                                " occupants exceed " + std::to_string(width() * height()) +
                                " cells");
}

GridState Environment::reset(Rng& rng) const {
  const int cells = width() * height();
  const int k = n_agents_ + n_entities();
  // Partial Fisher-Yates: first k slots are a uniform draw without replacement.
  std::vector<int> idx(cells);
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < k; ++j)
    std::swap(idx[j], idx[j + rng.uniform_int(cells - j)]);

  GridState s;
  s.width = width();
  s.height = height();
  s.step = 0;
  s.agent_cells.reserve(n_agents_);
  for (int i = 0; i < n_agents_; ++i)
    s.agent_cells.push_back({idx[i] / width(), idx[i] % width()});
  s.entity_cells.reserve(n_entities());
  for (int e = 0; e < n_entities(); ++e)
    s.entity_cells.push_back({idx[n_agents_ + e] / width(), idx[n_agents_ + e] % width()});
  return s;
}

GridState Environment::reset(std::uint64_t seed) const {
  Rng rng(seed);
  return reset(rng);
}

double Environment::exact_reward(const GridState& state, const JointAction& action) const {
  const int n = n_agents_;
  Cell moved[128];  // n_agents + entities <= 100, enforced by the constructor
  for (int i = 0; i < n; ++i)
    moved[i] = moved_cell(state.agent_cells[i], action.actions[i], state.width, state.height);

  if (kind_ == EnvKind::multi_rover) {
    double dist_sum = 0.0;
    for (const Cell& landmark : state.entity_cells) {
      int best = manhattan(landmark, moved[0]);
      for (int i = 1; i < n; ++i) best = std::min(best, manhattan(landmark, moved[i]));
      dist_sum += best;
    }
    int collisions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (moved[i] == moved[j]) ++collisions;
    return -dist_sum / (state.width + state.height) - 0.5 * collisions;
  }

  // Predator-prey: team bonus if any predator's next cell is within the
  // prey's 8-neighborhood (or on top of it), prey taken at its current cell.
  const Cell& prey = state.entity_cells[0];
  for (int i = 0; i < n; ++i)
    if (chebyshev(moved[i], prey) <= 1) return 1.0;
  return 0.0;
}

double Environment::counterfactual_reward(const GridState& state, const JointAction& action,
                                          int agent_i, int alt_action) const {
  JointAction alt = action;
  alt.actions[agent_i] = alt_action;
  return exact_reward(state, alt);
}

std::pair<GridState, double> Environment::step(const GridState& state,
                                               const JointAction& action, Rng& rng) const {
  const double reward = exact_reward(state, action);
  GridState next = state;
  for (int i = 0; i < n_agents_; ++i)
    next.agent_cells[i] =
        moved_cell(state.agent_cells[i], action.actions[i], state.width, state.height);
  if (kind_ == EnvKind::predator_prey) {
    const int prey_action = rng.uniform_int(kNumActions);
    next.entity_cells[0] =
        moved_cell(state.entity_cells[0], prey_action, state.width, state.height);
  }
  next.step = state.step + 1;
  return {std::move(next), reward};
}

std::vector<double> Environment::observe(const GridState& state, int agent_i) const {
  const Cell& self = state.agent_cells[agent_i];
  const double scale = 1.0 / state.width;
  std::vector<double> obs;
  obs.reserve(observation_dim());
  for (int j = 0; j < n_agents_; ++j) {
    if (j == agent_i) continue;
    obs.push_back((state.agent_cells[j].row - self.row) * scale);
    obs.push_back((state.agent_cells[j].col - self.col) * scale);
  }
  for (const Cell& e : state.entity_cells) {
    obs.push_back((e.row - self.row) * scale);
    obs.push_back((e.col - self.col) * scale);
  }
  return obs;
}

Trajectory rollout_episode(const Environment& env, const JointPolicy& policy,
                           int horizon, Rng& rng) {
  Trajectory traj;
  traj.steps.reserve(horizon);
  GridState state = env.reset(rng);
  const int n = env.n_agents();
  for (int t = 0; t < horizon; ++t) {
    TrajectoryStep rec;
    rec.state = state;
    rec.observations.reserve(n);
    rec.joint_action.actions.resize(n);
    for (int i = 0; i < n; ++i) {
      rec.observations.push_back(env.observe(state, i));
      rec.joint_action.actions[i] =
          sample_action(policy.policies[i], rec.observations[i], rng);
    }
    auto [next, reward] = env.step(state, rec.joint_action, rng);
    rec.reward = reward;
    traj.steps.push_back(std::move(rec));
    state = std::move(next);
  }
  return traj;
}

}  // namespace drpg

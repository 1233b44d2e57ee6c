#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drpg/rng.hpp"

namespace drpg {

// Local action codes, shared by every environment and every agent.
enum : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kStay = 4 };
inline constexpr int kNumActions = 5;

enum class EnvKind { multi_rover, predator_prey };

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Full environment state: agent cells, entity cells (landmarks or the single
// prey), step counter, grid size.
struct GridState {
  std::vector<Cell> agent_cells;
  std::vector<Cell> entity_cells;
  int step = 0;
  int width = 10;
  int height = 10;
};

struct JointAction {
  std::vector<int> actions;  // one entry per agent, each in [0, kNumActions)
};

struct TrajectoryStep {
  GridState state;
  std::vector<std::vector<double>> observations;  // one vector per agent
  JointAction joint_action;
  double reward = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
};

Cell moved_cell(const Cell& c, int action, int width, int height);
int manhattan(const Cell& a, const Cell& b);
int chebyshev(const Cell& a, const Cell& b);

// The two benchmark tasks behind one multi-agent MDP interface. Instances are
// cheap value-like objects; one per run, safely movable between threads.
class Environment {
 public:
  Environment(EnvKind kind, int n_agents);

  EnvKind kind() const { return kind_; }
  int n_agents() const { return n_agents_; }
  int n_entities() const { return kind_ == EnvKind::multi_rover ? n_agents_ : 1; }
  int width() const { return 10; }
  int height() const { return 10; }
  // Relative offsets to the other agents, then to the entities.
  int observation_dim() const { return 2 * (n_agents_ - 1) + 2 * n_entities(); }

  // All agent and entity cells drawn uniformly without replacement.
  GridState reset(Rng& rng) const;
  GridState reset(std::uint64_t seed) const;

  // Agents move with off-grid moves clamped; the prey, if any, takes a
  // uniformly random action of its own. Reward is exact_reward(state, action).
  std::pair<GridState, double> step(const GridState& state, const JointAction& action,
                                    Rng& rng) const;

  // Pure function of (state, action): distances are taken on post-move agent
  // cells and pre-move entity cells.
  double exact_reward(const GridState& state, const JointAction& action) const;

  // exact_reward with agent_i's action replaced by alt_action.
  double counterfactual_reward(const GridState& state, const JointAction& action,
                               int agent_i, int alt_action) const;

  std::vector<double> observe(const GridState& state, int agent_i) const;

 private:
  EnvKind kind_;
  int n_agents_;
};

// One full episode under the given policies; rewards are exact_reward of each
// recorded (state, action) pair.
struct JointPolicy;
Trajectory rollout_episode(const Environment& env, const JointPolicy& policy,
                           int horizon, Rng& rng);

}  // namespace drpg

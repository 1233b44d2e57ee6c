#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drpg/encoding.hpp"
#include "drpg/grid_env.hpp"
#include "drpg/mlp.hpp"
#include "drpg/policy.hpp"

namespace drpg {

// Pure scalar function of (state, joint action): the exact environment
// reward, a learned reward model, or a critic, depending on the caller.
using RewardFn = std::function<double(const GridState&, const JointAction&)>;
using QFn = RewardFn;

// --- return calculus ---

struct ReturnSeries {
  std::vector<double> values;  // discounted suffix sums, one per step
  double discount = 1.0;
};

ReturnSeries returns(const std::vector<double>& rewards, double gamma);

struct DifferenceReturnSeries {
  std::vector<std::vector<double>> per_agent;  // [agent][step]
};

// sum_b probs[b] * fn(state, action with agent_i's entry replaced by b);
// always exactly one fn evaluation per local action.
double counterfactual_expectation(const GridState& state, const JointAction& action,
                                  int agent_i, std::span<const double> action_probs,
                                  const RewardFn& fn);

// fn(state, action) minus the counterfactual expectation above.
double aristocrat_difference(const GridState& state, const JointAction& action, int agent_i,
                             std::span<const double> action_probs, const RewardFn& fn);
double aristocrat_difference(const GridState& state, const JointAction& action, int agent_i,
                             const AgentPolicy& policy, std::span<const double> observation,
                             const RewardFn& fn);

// Per-agent discounted suffix sums of the per-step difference rewards. The
// minuend at each step is the recorded reward, so the series decomposes as
// the shared return minus a per-agent baseline for any fn.
DifferenceReturnSeries difference_returns(const Trajectory& trajectory,
                                          const JointPolicy& policy, const RewardFn& fn,
                                          double gamma);

// --- policy updates (one ascent step per agent per episode) ---

// Shared mechanism: accumulates sum_t gamma^t * weights[agent][t] *
// grad log pi(a_t | obs_t) and applies one ascent step per agent.
void weighted_policy_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                            double alpha_theta,
                            const std::vector<std::vector<double>>& weights,
                            const std::string& context = {});

void reinforce_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                      double alpha_theta, const std::string& context = {});

void dr_reinforce_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                         double alpha_theta, const RewardFn& reward_fn,
                         const std::string& context = {});

// --- centralized action-value critic ---

inline constexpr int kCriticHiddenDim = 256;
inline constexpr int kTargetRefreshInterval = 100;

struct Critic {
  MlpParams params;
  MlpParams target;      // frozen copy supplying the bootstrap value
  long long updates = 0;
};

Critic make_critic(const Environment& env, Rng& rng, int hidden_dim = kCriticHiddenDim);

double critic_value(const MlpParams& params, const GridState& state, const JointAction& action);
double critic_value(const MlpParams& params, const GridState& state, const JointAction& action,
                    Workspace& ws);

struct Transition {
  const GridState* state;
  const JointAction* action;
  double reward;
  const GridState* next_state = nullptr;  // null on terminal steps: zero bootstrap
  const JointAction* next_action = nullptr;
};

// One semi-gradient step on the squared TD error; returns the TD error. The
// target copy is refreshed every kTargetRefreshInterval updates.
double td_update_critic(Critic& critic, const Transition& transition, double gamma,
                        double alpha_omega, const std::string& context = {});
double td_update_critic(Critic& critic, const Transition& transition, double gamma,
                        double alpha_omega, Workspace& ws, const std::string& context = {});

// Counterfactual advantage: q(state, action) minus the policy expectation of
// q with agent_i's action substituted. Exactly one q evaluation per local
// action, the other agents' actions held fixed.
double coma_advantage(const QFn& q_fn, const GridState& state, const JointAction& action,
                      int agent_i, std::span<const double> action_probs);
double coma_advantage(const Critic& critic, const GridState& state, const JointAction& action,
                      int agent_i, const AgentPolicy& policy,
                      std::span<const double> observation);

// Critic trained per step in time order, then policies updated with the
// counterfactual advantage (coma) or the raw critic value (q_a2c).
void coma_update(const Trajectory& trajectory, JointPolicy& policy, Critic& critic,
                 double gamma, double alpha_theta, double alpha_omega,
                 const std::string& context = {});
void q_a2c_update(const Trajectory& trajectory, JointPolicy& policy, Critic& critic,
                  double gamma, double alpha_theta, double alpha_omega,
                  const std::string& context = {});

// --- local reward regression (per-agent difference vs. a default action) ---

inline constexpr int kColbyDefaultAction = kStay;

struct LocalRewardNets {
  std::vector<MlpParams> nets;  // one per agent, input = state ++ one-hot local action
};

LocalRewardNets make_local_reward_nets(const Environment& env, Rng& rng,
                                       int hidden_dim = kCriticHiddenDim);

double local_reward_value(const MlpParams& net, const GridState& state, int local_action);

// Each local net regresses the shared reward on (state, own action); policies
// are weighted by discounted suffix sums of reward minus the net's value at
// the default action.
void colby_update(const Trajectory& trajectory, JointPolicy& policy, LocalRewardNets& nets,
                  double gamma, double alpha_theta, double alpha_psi,
                  const std::string& context = {});

}  // namespace drpg

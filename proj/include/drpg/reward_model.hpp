#pragma once

#include <span>
#include <string>
#include <vector>

#include "drpg/encoding.hpp"
#include "drpg/grid_env.hpp"
#include "drpg/policy.hpp"

namespace drpg {

inline constexpr int kRewardNetHiddenDim = 256;

// Centralized reward regression model over (state, joint action).
struct RewardNet {
  MlpParams params;
};

RewardNet make_reward_net(int n_agents, int n_entities, Rng& rng,
                          int hidden_dim = kRewardNetHiddenDim);

double predict(const RewardNet& net, const GridState& state, const JointAction& action);
double predict(const RewardNet& net, const GridState& state, const JointAction& action,
               Workspace& ws);

inline double regression_loss(double observed_reward, double predicted_reward) {
  const double residual = observed_reward - predicted_reward;
  return 0.5 * residual * residual;
}

// One gradient-descent step on the squared-error loss for this sample.
void regress_step(RewardNet& net, const GridState& state, const JointAction& action,
                  double observed_reward, double alpha_psi, const std::string& context = {});
void regress_step(RewardNet& net, const GridState& state, const JointAction& action,
                  double observed_reward, double alpha_psi, Workspace& ws,
                  const std::string& context = {});

// observed_reward minus the policy expectation of the model's prediction with
// agent_i's action substituted; exactly one network evaluation per local
// action. The minuend is the observed environment reward, not the model's own
// prediction.
double estimated_difference_reward(const RewardNet& net, const GridState& state,
                                   const JointAction& action, double observed_reward,
                                   int agent_i, std::span<const double> action_probs);
double estimated_difference_reward(const RewardNet& net, const GridState& state,
                                   const JointAction& action, double observed_reward,
                                   int agent_i, const AgentPolicy& policy,
                                   std::span<const double> observation);

// Per-agent discounted suffix sums of the estimated difference rewards over a
// recorded episode; equals difference_returns with fn = predict.
std::vector<std::vector<double>> estimated_difference_returns(const RewardNet& net,
                                                              const Trajectory& trajectory,
                                                              const JointPolicy& policy,
                                                              double gamma);

}  // namespace drpg

#include "drpg/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace drpg {

ReturnSeries returns(const std::vector<double>& rewards, double gamma) {
  if (rewards.empty()) throw std::invalid_argument("returns: empty reward sequence");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("returns: discount must be in (0, 1]");
  ReturnSeries rs;
  rs.discount = gamma;
  rs.values.resize(rewards.size());
  rs.values.back() = rewards.back();
  for (int t = static_cast<int>(rewards.size()) - 2; t >= 0; --t)
    rs.values[t] = rewards[t] + gamma * rs.values[t + 1];
  return rs;
}

double counterfactual_expectation(const GridState& state, const JointAction& action,
                                  int agent_i, std::span<const double> action_probs,
                                  const RewardFn& fn) {
  JointAction substituted = action;
  double acc = 0.0;
  for (int b = 0; b < static_cast<int>(action_probs.size()); ++b) {
    substituted.actions[agent_i] = b;
    acc += action_probs[b] * fn(state, substituted);
  }
  return acc;
}

double aristocrat_difference(const GridState& state, const JointAction& action, int agent_i,
                             std::span<const double> action_probs, const RewardFn& fn) {
  return fn(state, action) -
         counterfactual_expectation(state, action, agent_i, action_probs, fn);
}

double aristocrat_difference(const GridState& state, const JointAction& action, int agent_i,
                             const AgentPolicy& policy, std::span<const double> observation,
                             const RewardFn& fn) {
  const std::vector<double> probs = action_distribution(policy, observation);
  return aristocrat_difference(state, action, agent_i, probs, fn);
}

DifferenceReturnSeries difference_returns(const Trajectory& trajectory,
                                          const JointPolicy& policy, const RewardFn& fn,
                                          double gamma) {
  const int n = static_cast<int>(policy.policies.size());
  const int T = static_cast<int>(trajectory.steps.size());
  DifferenceReturnSeries out;
  out.per_agent.assign(n, std::vector<double>(T, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<double>& series = out.per_agent[i];
    for (int t = 0; t < T; ++t) {
      const TrajectoryStep& step = trajectory.steps[t];
      const std::vector<double> probs =
          action_distribution(policy.policies[i], step.observations[i]);
      series[t] = step.reward - counterfactual_expectation(step.state, step.joint_action,
                                                           i, probs, fn);
    }
    for (int t = T - 2; t >= 0; --t) series[t] += gamma * series[t + 1];
  }
  return out;
}

void weighted_policy_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                            double alpha_theta,
                            const std::vector<std::vector<double>>& weights,
                            const std::string& context) {
  const int n = static_cast<int>(policy.policies.size());
  const int T = static_cast<int>(trajectory.steps.size());
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("weighted_policy_update: one weight series per agent required");
  std::vector<double> hidden;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(weights[i].size()) != T)
      throw std::invalid_argument("weighted_policy_update: weight series length mismatch");
    MlpParams& params = policy.policies[i].params;
    Gradients acc = zero_gradients(params);
    std::vector<double> cotangent(params.output_dim);
    double discount_t = 1.0;
    for (int t = 0; t < T; ++t) {
      const double w = discount_t * weights[i][t];
      if (w != 0.0) {
        const TrajectoryStep& step = trajectory.steps[t];
        const std::vector<double> probs =
            action_distribution(params, step.observations[i]);
        for (int a = 0; a < params.output_dim; ++a) cotangent[a] = -probs[a];
        cotangent[step.joint_action.actions[i]] += 1.0;
        backward_accumulate(params, step.observations[i], cotangent, w, acc, hidden);
      }
      discount_t *= gamma;
    }
    sgd_step(params, acc, alpha_theta, StepDirection::ascent, context);
  }
}

void reinforce_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                      double alpha_theta, const std::string& context) {
  std::vector<double> rewards(trajectory.steps.size());
  for (std::size_t t = 0; t < trajectory.steps.size(); ++t)
    rewards[t] = trajectory.steps[t].reward;
  const ReturnSeries g = returns(rewards, gamma);
  // The shared return weights every agent identically.
  const std::vector<std::vector<double>> weights(policy.policies.size(), g.values);
  weighted_policy_update(trajectory, policy, gamma, alpha_theta, weights, context);
}

void dr_reinforce_update(const Trajectory& trajectory, JointPolicy& policy, double gamma,
                         double alpha_theta, const RewardFn& reward_fn,
                         const std::string& context) {
  const DifferenceReturnSeries dg = difference_returns(trajectory, policy, reward_fn, gamma);
  weighted_policy_update(trajectory, policy, gamma, alpha_theta, dg.per_agent, context);
}

// --- critic ---

Critic make_critic(const Environment& env, Rng& rng, int hidden_dim) {
  Critic c;
  c.params = make_mlp(joint_input_dim(env.n_agents(), env.n_entities()), hidden_dim, 1, rng);
  c.target = c.params;
  return c;
}

double critic_value(const MlpParams& params, const GridState& state, const JointAction& action,
                    Workspace& ws) {
  joint_input_into(state, action, ws.input);
  return eval_scalar(params, ws.input, ws);
}

double critic_value(const MlpParams& params, const GridState& state, const JointAction& action) {
  Workspace ws;
  return critic_value(params, state, action, ws);
}

double td_update_critic(Critic& critic, const Transition& transition, double gamma,
                        double alpha_omega, Workspace& ws, const std::string& context) {
  double bootstrap = 0.0;
  if (transition.next_state != nullptr)
    bootstrap = critic_value(critic.target, *transition.next_state, *transition.next_action, ws);
  joint_input_into(*transition.state, *transition.action, ws.input);
  const double q_sa = eval_scalar(critic.params, ws.input, ws);
  const double delta = transition.reward + gamma * bootstrap - q_sa;
  if (!std::isfinite(delta))
    throw DivergenceError("td_update_critic: non-finite TD error" +
                          (context.empty() ? std::string{} : " [" + context + "]"));
  const double cotangent[1] = {1.0};
  apply_scaled_gradient(critic.params, ws.input, cotangent, alpha_omega * delta,
                        ws.hidden, ws.up);
  critic.updates += 1;
  if (critic.updates % kTargetRefreshInterval == 0) critic.target = critic.params;
  return delta;
}

double td_update_critic(Critic& critic, const Transition& transition, double gamma,
                        double alpha_omega, const std::string& context) {
  Workspace ws;
  return td_update_critic(critic, transition, gamma, alpha_omega, ws, context);
}

namespace {

// q evaluations with agent_i's one-hot block patched in place, one per local
// action. Returns q at the taken action and accumulates the expectation.
double counterfactual_q_scan(const MlpParams& q, const GridState& state,
                             const JointAction& action, int agent_i,
                             std::span<const double> probs, Workspace& ws,
                             double& expectation) {
  joint_input_into(state, action, ws.input);
  const int block = state_encoding_dim(static_cast<int>(state.agent_cells.size()),
                                       static_cast<int>(state.entity_cells.size())) +
                    kNumActions * agent_i;
  for (int a = 0; a < kNumActions; ++a) ws.input[block + a] = 0.0;
  expectation = 0.0;
  double q_taken = 0.0;
  for (int b = 0; b < static_cast<int>(probs.size()); ++b) {
    ws.input[block + b] = 1.0;
    const double v = eval_scalar(q, ws.input, ws);
    ws.input[block + b] = 0.0;
    expectation += probs[b] * v;
    if (b == action.actions[agent_i]) q_taken = v;
  }
  return q_taken;
}

void critic_episode_pass(const Trajectory& trajectory, Critic& critic, double gamma,
                         double alpha_omega, Workspace& ws, const std::string& context) {
  const int T = static_cast<int>(trajectory.steps.size());
  for (int t = 0; t < T; ++t) {
    Transition tr{&trajectory.steps[t].state, &trajectory.steps[t].joint_action,
                  trajectory.steps[t].reward, nullptr, nullptr};
    if (t + 1 < T) {
      tr.next_state = &trajectory.steps[t + 1].state;
      tr.next_action = &trajectory.steps[t + 1].joint_action;
    }
    td_update_critic(critic, tr, gamma, alpha_omega, ws, context);
  }
}

}  // namespace

double coma_advantage(const QFn& q_fn, const GridState& state, const JointAction& action,
                      int agent_i, std::span<const double> action_probs) {
  const double q_taken = q_fn(state, action);
  return q_taken - counterfactual_expectation(state, action, agent_i, action_probs, q_fn);
}

double coma_advantage(const Critic& critic, const GridState& state, const JointAction& action,
                      int agent_i, const AgentPolicy& policy,
                      std::span<const double> observation) {
  const std::vector<double> probs = action_distribution(policy, observation);
  Workspace ws;
  double expectation = 0.0;
  const double q_taken =
      counterfactual_q_scan(critic.params, state, action, agent_i, probs, ws, expectation);
  return q_taken - expectation;
}

void coma_update(const Trajectory& trajectory, JointPolicy& policy, Critic& critic,
                 double gamma, double alpha_theta, double alpha_omega,
                 const std::string& context) {
  Workspace ws;
  critic_episode_pass(trajectory, critic, gamma, alpha_omega, ws, context);
  const int n = static_cast<int>(policy.policies.size());
  const int T = static_cast<int>(trajectory.steps.size());
  std::vector<std::vector<double>> weights(n, std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    const TrajectoryStep& step = trajectory.steps[t];
    for (int i = 0; i < n; ++i) {
      const std::vector<double> probs =
          action_distribution(policy.policies[i], step.observations[i]);
      double expectation = 0.0;
      const double q_taken = counterfactual_q_scan(critic.params, step.state,
                                                   step.joint_action, i, probs, ws,
                                                   expectation);
      weights[i][t] = q_taken - expectation;
    }
  }
  weighted_policy_update(trajectory, policy, gamma, alpha_theta, weights, context);
}

void q_a2c_update(const Trajectory& trajectory, JointPolicy& policy, Critic& critic,
                  double gamma, double alpha_theta, double alpha_omega,
                  const std::string& context) {
  Workspace ws;
  critic_episode_pass(trajectory, critic, gamma, alpha_omega, ws, context);
  const int n = static_cast<int>(policy.policies.size());
  const int T = static_cast<int>(trajectory.steps.size());
  std::vector<std::vector<double>> weights(n, std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    const TrajectoryStep& step = trajectory.steps[t];
    const double q_sa = critic_value(critic.params, step.state, step.joint_action, ws);
    for (int i = 0; i < n; ++i) weights[i][t] = q_sa;
  }
  weighted_policy_update(trajectory, policy, gamma, alpha_theta, weights, context);
}

// --- local reward nets ---

LocalRewardNets make_local_reward_nets(const Environment& env, Rng& rng, int hidden_dim) {
  LocalRewardNets nets;
  nets.nets.reserve(env.n_agents());
  for (int i = 0; i < env.n_agents(); ++i)
    nets.nets.push_back(
        make_mlp(local_input_dim(env.n_agents(), env.n_entities()), hidden_dim, 1, rng));
  return nets;
}

double local_reward_value(const MlpParams& net, const GridState& state, int local_action) {
  Workspace ws;
  local_input_into(state, local_action, ws.input);
  return eval_scalar(net, ws.input, ws);
}

void colby_update(const Trajectory& trajectory, JointPolicy& policy, LocalRewardNets& nets,
                  double gamma, double alpha_theta, double alpha_psi,
                  const std::string& context) {
  const int n = static_cast<int>(policy.policies.size());
  const int T = static_cast<int>(trajectory.steps.size());
  Workspace ws;
  // Regression pass, per step in time order.
  for (int t = 0; t < T; ++t) {
    const TrajectoryStep& step = trajectory.steps[t];
    for (int i = 0; i < n; ++i) {
      local_input_into(step.state, step.joint_action.actions[i], ws.input);
      const double predicted = eval_scalar(nets.nets[i], ws.input, ws);
      const double residual = predicted - step.reward;
      if (!std::isfinite(residual))
        throw DivergenceError("colby_update: non-finite regression residual" +
                              (context.empty() ? std::string{} : " [" + context + "]"));
      const double cotangent[1] = {1.0};
      apply_scaled_gradient(nets.nets[i], ws.input, cotangent, -alpha_psi * residual,
                            ws.hidden, ws.up);
    }
  }
  // Policy weights: discounted suffix sums of reward minus the default-action value.
  std::vector<std::vector<double>> weights(n, std::vector<double>(T));
  for (int i = 0; i < n; ++i) {
    std::vector<double>& series = weights[i];
    for (int t = 0; t < T; ++t) {
      local_input_into(trajectory.steps[t].state, kColbyDefaultAction, ws.input);
      series[t] = trajectory.steps[t].reward - eval_scalar(nets.nets[i], ws.input, ws);
    }
    for (int t = T - 2; t >= 0; --t) series[t] += gamma * series[t + 1];
  }
  weighted_policy_update(trajectory, policy, gamma, alpha_theta, weights, context);
}

}  // namespace drpg

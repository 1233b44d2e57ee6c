#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "drpg/grid_env.hpp"
#include "drpg/mlp.hpp"
#include "drpg/rng.hpp"

namespace drpg {

// Decentralized categorical policy over the local actions; the network output
// layer holds the logits.
struct AgentPolicy {
  MlpParams params;
  int agent_index = 0;
};

struct JointPolicy {
  std::vector<AgentPolicy> policies;
};

inline constexpr int kPolicyHiddenDim = 64;

AgentPolicy make_agent_policy(int observation_dim, int agent_index, Rng& rng,
                              int hidden_dim = kPolicyHiddenDim);
JointPolicy make_joint_policy(int n_agents, int observation_dim, Rng& rng,
                              int hidden_dim = kPolicyHiddenDim);

// softmax(logits) with max subtraction; stable for logit magnitudes well past
// 500. Generic over the network's output width.
std::vector<double> softmax(std::span<const double> logits);

std::vector<double> action_distribution(const MlpParams& params,
                                        std::span<const double> observation);
std::vector<double> action_distribution(const AgentPolicy& policy,
                                        std::span<const double> observation);

int sample_action(const AgentPolicy& policy, std::span<const double> observation, Rng& rng);

// Exact gradient of log pi(action | observation) with respect to the
// parameters, via the one-hot-minus-probabilities cotangent.
Gradients grad_log_prob(const MlpParams& params, std::span<const double> observation,
                        int action);
Gradients grad_log_prob(const AgentPolicy& policy, std::span<const double> observation,
                        int action);

// Snapshot format: u64 agent count, then one parameter record per agent in
// index order.
void save_joint_policy(const JointPolicy& policy, std::ostream& out);
JointPolicy load_joint_policy(std::istream& in);
void save_joint_policy_file(const JointPolicy& policy, const std::string& path);
JointPolicy load_joint_policy_file(const std::string& path);

}  // namespace drpg

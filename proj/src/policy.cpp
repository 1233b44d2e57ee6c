#include "drpg/policy.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace drpg {

AgentPolicy make_agent_policy(int observation_dim, int agent_index, Rng& rng, int hidden_dim) {
  AgentPolicy p;
  p.params = make_mlp(observation_dim, hidden_dim, kNumActions, rng);
  p.agent_index = agent_index;
  return p;
}

JointPolicy make_joint_policy(int n_agents, int observation_dim, Rng& rng, int hidden_dim) {
  JointPolicy jp;
  jp.policies.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i)
    jp.policies.push_back(make_agent_policy(observation_dim, i, rng, hidden_dim));
  return jp;
}

std::vector<double> softmax(std::span<const double> logits) {
  double max_logit = logits[0];
  for (double l : logits) {
    if (!std::isfinite(l)) throw DivergenceError("softmax: non-finite logit");
    max_logit = std::max(max_logit, l);
  }
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    probs[a] = std::exp(logits[a] - max_logit);
    sum += probs[a];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<double> action_distribution(const MlpParams& params,
                                        std::span<const double> observation) {
  return softmax(forward(params, observation));
}

std::vector<double> action_distribution(const AgentPolicy& policy,
                                        std::span<const double> observation) {
  return action_distribution(policy.params, observation);
}

int sample_action(const AgentPolicy& policy, std::span<const double> observation, Rng& rng) {
  const std::vector<double> probs = action_distribution(policy, observation);
  const double u = rng.uniform01();
  double cum = 0.0;
  const int last = static_cast<int>(probs.size()) - 1;
  for (int a = 0; a < last; ++a) {
    cum += probs[a];
    if (u < cum) return a;
  }
  return last;
}

Gradients grad_log_prob(const MlpParams& params, std::span<const double> observation,
                        int action) {
  if (action < 0 || action >= params.output_dim)
    throw std::invalid_argument("grad_log_prob: action out of range");
  std::vector<double> cotangent = action_distribution(params, observation);
  for (double& c : cotangent) c = -c;
  cotangent[action] += 1.0;
  return backward(params, observation, cotangent);
}

Gradients grad_log_prob(const AgentPolicy& policy, std::span<const double> observation,
                        int action) {
  return grad_log_prob(policy.params, observation, action);
}

void save_joint_policy(const JointPolicy& policy, std::ostream& out) {
  const std::uint64_t n = policy.policies.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const AgentPolicy& p : policy.policies) save_params(p.params, out);
}

JointPolicy load_joint_policy(std::istream& in) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n == 0 || n > 4096) throw std::runtime_error("load_joint_policy: bad header");
  JointPolicy jp;
  jp.policies.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    jp.policies.push_back({load_params(in), static_cast<int>(i)});
  return jp;
}

void save_joint_policy_file(const JointPolicy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_joint_policy: cannot open " + path);
  save_joint_policy(policy, out);
}

JointPolicy load_joint_policy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_joint_policy: cannot open " + path);
  return load_joint_policy(in);
}

}  // namespace drpg

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

#include "irsuav/mlp.hpp"
#include "irsuav/rng.hpp"

namespace irsuav {

struct PpoConfig {
  std::vector<int> hidden_sizes = {128, 128};
  double policy_lr = 1e-4;
  double value_lr = 3e-4;
  double discount = 0.9;     // zeta
  double clip_epsilon = 0.2;
  int horizon = 512;         // rollout length between updates
  int epochs = 10;
  int minibatch = 32;
  double init_log_std = std::log(0.5);
  double log_std_min = -5.0;
  double log_std_max = 1.0;
  double actor_init_scale = 1e-3;
};

// Diagonal Gaussian over raw actions: the mean comes from a tanh-output
// network, the per-dimension log standard deviation is a free learnable
// vector clamped to [log_std_min, log_std_max].
class GaussianPolicy {
 public:
  GaussianPolicy(int state_dim, int action_dim, const PpoConfig& cfg, RngStream& init_rng);

  // `action` is the raw Gaussian draw (kept for the probability ratio);
  // `clamped` is what the environment consumes. log_prob is the density of
  // the raw draw.
  struct Sample {
    Eigen::VectorXd action;
    Eigen::VectorXd clamped;
    double log_prob = 0.0;
  };

  Sample act(const Eigen::VectorXd& state, RngStream& rng) const;
  Eigen::VectorXd mean(const Eigen::VectorXd& state) const;
  double log_prob(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const;

  const Mlp& mean_net() const { return mean_net_; }
  Mlp& mean_net() { return mean_net_; }
  const Eigen::VectorXd& log_std() const { return log_std_; }
  Eigen::VectorXd& log_std() { return log_std_; }

 private:
  Mlp mean_net_;
  Eigen::VectorXd log_std_;
};

struct RolloutEntry {
  Eigen::VectorXd state;
  Eigen::VectorXd action;  // raw Gaussian draw
  double reward = 0.0;
  Eigen::VectorXd next_state;
  double log_prob_old = 0.0;
};

// Ordered on-policy storage for one collection phase; cleared by the update.
class RolloutBuffer {
 public:
  void push(RolloutEntry entry) { entries_.push_back(std::move(entry)); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }
  const std::vector<RolloutEntry>& entries() const { return entries_; }

 private:
  std::vector<RolloutEntry> entries_;
};

// One-step TD advantage r + zeta*V(s') - V(s).
double advantage(double reward, const Eigen::VectorXd& state, const Eigen::VectorXd& next_state,
                 const Mlp& value_net, double zeta);

// min(ratio*adv, clip(ratio, 1-eps, 1+eps)*adv); identical to the split
// positive/negative-advantage bounds.
double clipped_objective(double ratio, double adv, double epsilon);

struct PpoDiagnostics {
  double value_loss_before = 0.0;   // mean squared TD error over the rollout, pre-update
  double surrogate_after = 0.0;     // mean clipped objective over the rollout, post-update
  double ratio_in_band_frac = 0.0;  // post-update share of ratios within [1-eps, 1+eps]
  int minibatch_updates = 0;
};

class PpoAgent {
 public:
  PpoAgent(int state_dim, int action_dim, const PpoConfig& cfg, RngStream& init_rng);

  GaussianPolicy::Sample act(const Eigen::VectorXd& state, RngStream& rng) const;
  void store(RolloutEntry entry);
  bool rollout_full() const { return rollout_.size() >= static_cast<std::size_t>(cfg_.horizon); }

  // exp(log_prob_new - log_prob_old) at the stored raw action.
  double ratio(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
               double log_prob_old) const;

  // Clipped-surrogate ascent on the policy and TD-error descent on the value
  // net over shuffled minibatches; advantages are normalised per rollout and
  // the rollout is cleared afterwards. Returns nothing on an empty rollout.
  std::optional<PpoDiagnostics> update(RngStream& rng);

  const GaussianPolicy& policy() const { return policy_; }
  const Mlp& value_net() const { return value_net_; }
  Mlp& value_net() { return value_net_; }
  const RolloutBuffer& rollout() const { return rollout_; }
  const PpoConfig& config() const { return cfg_; }
  double mean_std() const;
  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  int state_dim_;
  int action_dim_;
  PpoConfig cfg_;
  GaussianPolicy policy_;
  Mlp value_net_;
  AdamState policy_opt_, value_opt_;
  AdamVecState log_std_opt_;
  RolloutBuffer rollout_;
};

}  // namespace irsuav

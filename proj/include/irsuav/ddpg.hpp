#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <vector>

#include "irsuav/mlp.hpp"
#include "irsuav/rng.hpp"

namespace irsuav {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double reward = 0.0;
  Eigen::VectorXd next_state;
};

// Fixed-capacity ring: once full, the oldest transition is overwritten.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void store(Transition t);
  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return storage_[i]; }

  // Uniform with replacement over current contents.
  std::vector<const Transition*> sample(std::size_t batch, RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> storage_;
};

struct DdpgConfig {
  std::vector<int> hidden_sizes = {128, 128};
  double actor_lr = 1e-3;
  double critic_lr = 2e-3;
  double discount = 0.9;        // zeta
  double target_mix = 0.01;     // soft-update coefficient
  int batch_size = 32;
  std::size_t replay_capacity = 100000;
  double noise_scale = 3.0;     // initial exploration scale, raw action units
  double noise_decay = 0.99995; // multiplicative, applied per noisy action
  double grad_clip_norm = 1.0;
  double actor_init_scale = 1e-3;  // final-layer shrink so early actions sit near 0
};

struct DdpgDiagnostics {
  double critic_loss = 0.0;  // mean squared TD error before the update
};

// Deterministic-policy actor-critic with target networks. The actor maps a
// state to raw actions in [-1, 1] (tanh output); the critic scores
// state-action pairs through a concatenated input.
class DdpgAgent {
 public:
  DdpgAgent(int state_dim, int action_dim, const DdpgConfig& cfg, RngStream& init_rng);

  Eigen::VectorXd act(const Eigen::VectorXd& state) const;

  // mu(s) + noise_scale * N(0,1) per dimension, clamped to [-1, 1]; decays
  // the noise scale after each call.
  Eigen::VectorXd act_with_noise(const Eigen::VectorXd& state, RngStream& rng);

  // Bootstrapped targets y_i = r_i + zeta * Q'(s', mu'(s')).
  std::vector<double> critic_targets(const std::vector<const Transition*>& batch) const;

  // One critic descent step, one actor ascent step, one soft update of both
  // targets. Returns nothing when the buffer holds fewer than batch_size
  // transitions (the update is skipped).
  std::optional<DdpgDiagnostics> train_step(const ReplayBuffer& buffer, RngStream& rng);

  double noise_scale() const { return noise_scale_; }
  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& actor_target() const { return actor_target_; }
  const Mlp& critic_target() const { return critic_target_; }
  const DdpgConfig& config() const { return cfg_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  int state_dim_;
  int action_dim_;
  DdpgConfig cfg_;
  Mlp actor_, critic_, actor_target_, critic_target_;
  AdamState actor_opt_, critic_opt_;
  double noise_scale_;
};

}  // namespace irsuav

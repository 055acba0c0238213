#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "irsuav/channel.hpp"
#include "irsuav/metrics.hpp"
#include "irsuav/rng.hpp"

namespace irsuav {

// Raw agent action: N power entries followed by K phase entries, each in
// [-1, 1]. Out-of-range values are clamped before mapping.
using CentralAction = Eigen::VectorXd;

struct EnvConfig {
  NetworkConfig net;
  ChannelParams chan;
  std::vector<Vec3> uav_positions;
  Vec3 irs_position{500.0, 500.0, 30.0};
  double cluster_radius_m = 500.0;
  int episode_length = 100;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;  // energy efficiency normalized by bandwidth, bits/Hz/J
  bool done = false;
  MetricsReport metrics;
};

// State features under a phase configuration: interleaved re/im of the
// compound channels H_{n,IRS} Phi h_{IRS,nm}, cluster-major then UE order
// (2*N*M features). Interference cross-terms and node positions are not
// part of the state.
Eigen::VectorXd state_features(const ChannelRealization& real, const PhaseShifts& phases);

// Episodic environment. Per episode: UE positions are resampled uniformly in
// a disc of radius cluster_radius_m around each UAV's ground projection and
// held fixed; the NLoS component of every IRS-UE channel is redrawn each
// step while the LoS geometry stays put. The channel draw sequence for a
// given seed does not depend on the actions taken.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  // Starts a new episode and returns the initial state, built under the
  // identity phase configuration (all theta_k = 0).
  Eigen::VectorXd reset();

  // Applies the clamped action mapping (powers to [0, p_max], phases to
  // [0, 2*pi]), scores the current channel draw, then redraws the NLoS
  // components for the next state. Throws std::logic_error when called
  // before reset() or after the episode finished.
  StepResult step(const CentralAction& raw_action);

  // State under the current phase configuration and channel draw; equals the
  // last state returned by reset()/step().
  Eigen::VectorXd observe_state() const;

  int state_dim() const { return 2 * cfg_.net.clusters * cfg_.net.ues_per_cluster; }
  int action_dim() const { return cfg_.net.clusters + cfg_.net.irs_elements; }

  const EnvConfig& config() const { return cfg_; }
  const ChannelRealization& channels() const { return realization_; }
  const PhaseShifts& phases() const { return phases_; }
  const std::vector<std::vector<Vec3>>& ue_positions() const { return ue_positions_; }

  static PowerAllocation map_powers(const CentralAction& raw, const NetworkConfig& net);
  static PhaseShifts map_phases(const CentralAction& raw, const NetworkConfig& net);

 private:
  void redraw_ag_channels();

  EnvConfig cfg_;
  RngStream rng_;
  std::vector<std::vector<Vec3>> ue_positions_;
  ChannelRealization realization_;
  PhaseShifts phases_;
  int steps_taken_ = 0;
  bool episode_active_ = false;
};

}  // namespace irsuav

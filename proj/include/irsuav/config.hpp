#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsuav/environment.hpp"
#include "irsuav/schemes.hpp"

namespace irsuav {

// Parse or validation failure of a run configuration; maps to exit code 1.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Experiment configuration in user-facing units (dB/dBm fields as written;
// conversions to linear happen once when the environment config is built).
//
// File grammar: one `key = value` pair per line; `#` starts a comment; blank
// lines are ignored. Lists are comma separated; positions are `x,y,z`
// triples, several of them separated by `;`. Unknown keys are rejected.
// Missing keys fall back to the defaults below.
struct RunConfig {
  int clusters = 3;                     // key: clusters (alias N)
  int ues_per_cluster = 10;             // key: ues_per_cluster (alias M)
  int irs_elements = 20;                // key: irs_elements (alias K)
  double bandwidth_hz = 1e6;            // key: bandwidth_hz
  double p_max_w = 5.0;                 // key: p_max_w
  double p_fixed_w = 4.0;               // key: p_fixed_w
  double noise_dbm = -134.0;            // key: noise_dbm
  double beta0_db = -30.0;              // key: beta0_db
  double kappa1 = 2.0;                  // key: kappa1
  double kappa2 = 2.2;                  // key: kappa2
  double rician_factor = 4.0;           // key: rician_factor
  double d_over_lambda = 0.5;           // key: d_over_lambda
  Vec3 irs_position{500.0, 500.0, 30.0};  // key: irs_position
  std::optional<std::vector<Vec3>> uav_positions;  // key: uav_positions
  double coverage_m = 500.0;            // key: coverage_m
  int episode_length = 100;             // key: episode_length
  Scheme scheme = Scheme::CDdpg;        // key: scheme
  int episodes = 1000;                  // key: episodes
  std::vector<std::uint64_t> seeds{1, 2, 3};  // key: seeds
  std::string out_dir = "runs";         // key: out_dir
  int jobs = 2;                         // key: jobs
  bool dump_trajectories = false;       // key: dump_trajectories
  std::vector<int> sweep_k{10, 20, 30}; // key: sweep_k
  double init_std = 0.5;                // key: init_std (initial policy std)
  DdpgConfig ddpg;  // keys: actor_lr critic_lr target_mix replay_capacity
                    //       noise_scale noise_decay grad_clip_norm
  PpoConfig ppo;    // keys: policy_lr value_lr clip_epsilon horizon ppo_epochs
                    // discount, batch_size and hidden_sizes apply to both
                    // agent families

  void validate() const;  // throws ConfigError

  // UAV positions actually used: the explicit list when given (its length
  // must equal `clusters`), otherwise the first `clusters` default sites;
  // more than three clusters require an explicit list.
  std::vector<Vec3> resolved_uav_positions() const;

  EnvConfig env_config() const;              // converts dB fields to linear
  EnvConfig env_config_with_k(int k) const;  // sweep variant
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace irsuav

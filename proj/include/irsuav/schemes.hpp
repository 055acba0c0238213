#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irsuav/ddpg.hpp"
#include "irsuav/environment.hpp"
#include "irsuav/ppo.hpp"

namespace irsuav {

// The six experimental schemes: centralised/parallel DDPG and PPO plus the
// max-power (MPT) and random-phase (RSS) baselines.
enum class Scheme { CDdpg, PDdpg, CPpo, PPpo, Mpt, Rss };

std::string scheme_tag(Scheme scheme);
Scheme scheme_from_tag(const std::string& tag);
const std::vector<Scheme>& all_schemes();

struct TrainOptions {
  int episodes = 1000;
  std::uint64_t seed = 1;
  DdpgConfig ddpg;
  PpoConfig ppo;
  std::ostream* trajectory_csv = nullptr;  // optional per-step dump
  std::ostream* checkpoint_sink = nullptr; // final agent parameters, when set
};

struct EpisodeRecord {
  double mean_reward = 0.0;       // mean of the T step rewards
  double exploration_scale = 0.0; // DDPG noise scale / PPO mean action std
};

struct RunTrace {
  Scheme scheme = Scheme::CDdpg;
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;

  // Mean reward over the last `window` episodes (whole trace when shorter).
  double final_mean(int window = 100) const;
};

// Concatenates per-agent actions in (powers, phases) order: agents 0..N-1
// contribute one power entry each, agent N the K phase entries.
CentralAction compose_team_action(const std::vector<Eigen::VectorXd>& per_agent, int clusters,
                                  int irs_elements);

// Single agent controlling all N + K action dimensions.
RunTrace run_centralised(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts);

// N + 1 agents in lockstep: every agent observes the full state, the shared
// scalar reward is handed to each of them, and each stores and learns from
// its own action slice.
RunTrace run_parallel(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts);

// Powers pinned at p_max; a PPO agent drives the K phases.
RunTrace run_mpt(const EnvConfig& env_cfg, const TrainOptions& opts);

// Phases drawn uniformly in [0, 2*pi] each step; a PPO agent drives the N
// powers.
RunTrace run_rss(const EnvConfig& env_cfg, const TrainOptions& opts);

RunTrace run_scheme(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts);

}  // namespace irsuav

#include "irsuav/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace irsuav {

namespace {

// Sub-stream tags: every random consumer of a run owns a stream derived from
// (run seed, tag) so traces replay exactly.
constexpr std::uint64_t kEnvTag = 0;
constexpr std::uint64_t kAgentInitTag = 1;    // + agent index
constexpr std::uint64_t kActionTag = 101;     // + agent index
constexpr std::uint64_t kUpdateTag = 201;     // + agent index
constexpr std::uint64_t kBaselinePhaseTag = 301;

void write_trajectory_header(std::ostream* out, const NetworkConfig& net) {
  if (!out) return;
  *out << "episode,step,reward";
  for (int n = 0; n < net.clusters; ++n)
    for (int m = 0; m < net.ues_per_cluster; ++m) *out << ",sinr_" << n << '_' << m;
  *out << '\n';
}

void write_trajectory_row(std::ostream* out, int episode, int step, const StepResult& result) {
  if (!out) return;
  out->precision(17);
  *out << episode << ',' << step << ',' << result.reward;
  for (double s : result.metrics.sinr) *out << ',' << s;
  *out << '\n';
}

EnvConfig seeded_env_config(const EnvConfig& env_cfg, std::uint64_t run_seed) {
  EnvConfig cfg = env_cfg;
  cfg.seed = RngStream::derive(run_seed, kEnvTag).next_u64();
  return cfg;
}

}  // namespace

std::string scheme_tag(Scheme scheme) {
  switch (scheme) {
    case Scheme::CDdpg: return "c-ddpg";
    case Scheme::PDdpg: return "p-ddpg";
    case Scheme::CPpo: return "c-ppo";
    case Scheme::PPpo: return "p-ppo";
    case Scheme::Mpt: return "mpt";
    case Scheme::Rss: return "rss";
  }
  throw std::logic_error("scheme_tag: unknown scheme");
}

Scheme scheme_from_tag(const std::string& tag) {
  for (Scheme s : all_schemes())
    if (scheme_tag(s) == tag) return s;
  throw std::invalid_argument("unknown scheme tag '" + tag + "'");
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes{Scheme::CDdpg, Scheme::PDdpg, Scheme::CPpo,
                                           Scheme::PPpo,  Scheme::Mpt,   Scheme::Rss};
  return schemes;
}

double RunTrace::final_mean(int window) const {
  if (episodes.empty()) return 0.0;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(window), episodes.size());
  double sum = 0.0;
  for (std::size_t i = episodes.size() - take; i < episodes.size(); ++i)
    sum += episodes[i].mean_reward;
  return sum / static_cast<double>(take);
}

CentralAction compose_team_action(const std::vector<Eigen::VectorXd>& per_agent, int clusters,
                                  int irs_elements) {
  if (per_agent.size() != static_cast<std::size_t>(clusters) + 1)
    throw std::invalid_argument("compose_team_action: need N power agents plus one IRS agent");
  CentralAction action(clusters + irs_elements);
  for (int n = 0; n < clusters; ++n) {
    if (per_agent[static_cast<std::size_t>(n)].size() != 1)
      throw std::invalid_argument("compose_team_action: power agents emit one dimension");
    action[n] = per_agent[static_cast<std::size_t>(n)][0];
  }
  const Eigen::VectorXd& phases = per_agent[static_cast<std::size_t>(clusters)];
  if (phases.size() != irs_elements)
    throw std::invalid_argument("compose_team_action: IRS agent emits K dimensions");
  action.tail(irs_elements) = phases;
  return action;
}

RunTrace run_centralised(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts) {
  if (scheme != Scheme::CDdpg && scheme != Scheme::CPpo)
    throw std::invalid_argument("run_centralised: scheme must be c-ddpg or c-ppo");

  Environment env(seeded_env_config(env_cfg, opts.seed));
  RngStream init_rng = RngStream::derive(opts.seed, kAgentInitTag);
  RngStream action_rng = RngStream::derive(opts.seed, kActionTag);
  RngStream update_rng = RngStream::derive(opts.seed, kUpdateTag);

  RunTrace trace{scheme, opts.seed, {}};
  trace.episodes.reserve(static_cast<std::size_t>(opts.episodes));
  write_trajectory_header(opts.trajectory_csv, env.config().net);

  if (scheme == Scheme::CDdpg) {
    DdpgAgent agent(env.state_dim(), env.action_dim(), opts.ddpg, init_rng);
    ReplayBuffer buffer(opts.ddpg.replay_capacity);
    for (int episode = 0; episode < opts.episodes; ++episode) {
      Eigen::VectorXd state = env.reset();
      double reward_sum = 0.0;
      for (int t = 0; t < env.config().episode_length; ++t) {
        const Eigen::VectorXd action = agent.act_with_noise(state, action_rng);
        const StepResult result = env.step(action);
        buffer.store({state, action, result.reward, result.next_state});
        agent.train_step(buffer, update_rng);
        write_trajectory_row(opts.trajectory_csv, episode, t, result);
        reward_sum += result.reward;
        state = result.next_state;
      }
      trace.episodes.push_back({reward_sum / env.config().episode_length, agent.noise_scale()});
    }
    if (opts.checkpoint_sink) agent.save(*opts.checkpoint_sink);
  } else {
    PpoAgent agent(env.state_dim(), env.action_dim(), opts.ppo, init_rng);
    for (int episode = 0; episode < opts.episodes; ++episode) {
      Eigen::VectorXd state = env.reset();
      double reward_sum = 0.0;
      for (int t = 0; t < env.config().episode_length; ++t) {
        const GaussianPolicy::Sample sample = agent.act(state, action_rng);
        const StepResult result = env.step(sample.clamped);
        agent.store({state, sample.action, result.reward, result.next_state, sample.log_prob});
        if (agent.rollout_full()) agent.update(update_rng);
        write_trajectory_row(opts.trajectory_csv, episode, t, result);
        reward_sum += result.reward;
        state = result.next_state;
      }
      trace.episodes.push_back({reward_sum / env.config().episode_length, agent.mean_std()});
    }
    if (opts.checkpoint_sink) agent.save(*opts.checkpoint_sink);
  }
  return trace;
}

RunTrace run_parallel(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts) {
  if (scheme != Scheme::PDdpg && scheme != Scheme::PPpo)
    throw std::invalid_argument("run_parallel: scheme must be p-ddpg or p-ppo");

  Environment env(seeded_env_config(env_cfg, opts.seed));
  const int clusters = env.config().net.clusters;
  const int elements = env.config().net.irs_elements;
  const std::size_t team_size = static_cast<std::size_t>(clusters) + 1;

  std::vector<RngStream> action_rngs, update_rngs;
  for (std::size_t w = 0; w < team_size; ++w) {
    action_rngs.push_back(RngStream::derive(opts.seed, kActionTag + w));
    update_rngs.push_back(RngStream::derive(opts.seed, kUpdateTag + w));
  }
  const auto agent_action_dim = [&](std::size_t w) {
    return w < static_cast<std::size_t>(clusters) ? 1 : elements;
  };

  RunTrace trace{scheme, opts.seed, {}};
  trace.episodes.reserve(static_cast<std::size_t>(opts.episodes));
  write_trajectory_header(opts.trajectory_csv, env.config().net);

  if (scheme == Scheme::PDdpg) {
    std::vector<DdpgAgent> team;
    std::vector<ReplayBuffer> buffers;
    for (std::size_t w = 0; w < team_size; ++w) {
      RngStream init_rng = RngStream::derive(opts.seed, kAgentInitTag + w);
      team.emplace_back(env.state_dim(), agent_action_dim(w), opts.ddpg, init_rng);
      buffers.emplace_back(opts.ddpg.replay_capacity);
    }
    for (int episode = 0; episode < opts.episodes; ++episode) {
      Eigen::VectorXd state = env.reset();
      double reward_sum = 0.0;
      for (int t = 0; t < env.config().episode_length; ++t) {
        std::vector<Eigen::VectorXd> actions(team_size);
        for (std::size_t w = 0; w < team_size; ++w)
          actions[w] = team[w].act_with_noise(state, action_rngs[w]);
        const StepResult result = env.step(compose_team_action(actions, clusters, elements));
        for (std::size_t w = 0; w < team_size; ++w) {
          buffers[w].store({state, actions[w], result.reward, result.next_state});
          team[w].train_step(buffers[w], update_rngs[w]);
        }
        write_trajectory_row(opts.trajectory_csv, episode, t, result);
        reward_sum += result.reward;
        state = result.next_state;
      }
      trace.episodes.push_back({reward_sum / env.config().episode_length, team[0].noise_scale()});
    }
    if (opts.checkpoint_sink)
      for (auto& agent : team) agent.save(*opts.checkpoint_sink);
  } else {
    std::vector<PpoAgent> team;
    for (std::size_t w = 0; w < team_size; ++w) {
      RngStream init_rng = RngStream::derive(opts.seed, kAgentInitTag + w);
      team.emplace_back(env.state_dim(), agent_action_dim(w), opts.ppo, init_rng);
    }
    for (int episode = 0; episode < opts.episodes; ++episode) {
      Eigen::VectorXd state = env.reset();
      double reward_sum = 0.0;
      for (int t = 0; t < env.config().episode_length; ++t) {
        std::vector<GaussianPolicy::Sample> samples(team_size);
        std::vector<Eigen::VectorXd> clamped(team_size);
        for (std::size_t w = 0; w < team_size; ++w) {
          samples[w] = team[w].act(state, action_rngs[w]);
          clamped[w] = samples[w].clamped;
        }
        const StepResult result = env.step(compose_team_action(clamped, clusters, elements));
        for (std::size_t w = 0; w < team_size; ++w) {
          team[w].store(
              {state, samples[w].action, result.reward, result.next_state, samples[w].log_prob});
          if (team[w].rollout_full()) team[w].update(update_rngs[w]);
        }
        write_trajectory_row(opts.trajectory_csv, episode, t, result);
        reward_sum += result.reward;
        state = result.next_state;
      }
      double std_sum = 0.0;
      for (const auto& agent : team) std_sum += agent.mean_std();
      trace.episodes.push_back(
          {reward_sum / env.config().episode_length, std_sum / static_cast<double>(team_size)});
    }
    if (opts.checkpoint_sink)
      for (auto& agent : team) agent.save(*opts.checkpoint_sink);
  }
  return trace;
}

namespace {

// Shared driver for the two baselines: a PPO learner controls one action
// block while the other block is pinned (MPT powers) or randomised (RSS
// phases).
RunTrace run_baseline(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts) {
  Environment env(seeded_env_config(env_cfg, opts.seed));
  const int clusters = env.config().net.clusters;
  const int elements = env.config().net.irs_elements;
  const bool learn_phases = scheme == Scheme::Mpt;
  const int learned_dim = learn_phases ? elements : clusters;

  RngStream init_rng = RngStream::derive(opts.seed, kAgentInitTag);
  RngStream action_rng = RngStream::derive(opts.seed, kActionTag);
  RngStream update_rng = RngStream::derive(opts.seed, kUpdateTag);
  RngStream phase_rng = RngStream::derive(opts.seed, kBaselinePhaseTag);

  PpoAgent agent(env.state_dim(), learned_dim, opts.ppo, init_rng);
  RunTrace trace{scheme, opts.seed, {}};
  trace.episodes.reserve(static_cast<std::size_t>(opts.episodes));
  write_trajectory_header(opts.trajectory_csv, env.config().net);

  for (int episode = 0; episode < opts.episodes; ++episode) {
    Eigen::VectorXd state = env.reset();
    double reward_sum = 0.0;
    for (int t = 0; t < env.config().episode_length; ++t) {
      const GaussianPolicy::Sample sample = agent.act(state, action_rng);
      CentralAction action(clusters + elements);
      if (learn_phases) {
        action.head(clusters).setOnes();  // pinned at p_max
        action.tail(elements) = sample.clamped;
      } else {
        action.head(clusters) = sample.clamped;
        for (int k = 0; k < elements; ++k) action[clusters + k] = phase_rng.uniform(-1.0, 1.0);
      }
      const StepResult result = env.step(action);
      agent.store({state, sample.action, result.reward, result.next_state, sample.log_prob});
      if (agent.rollout_full()) agent.update(update_rng);
      write_trajectory_row(opts.trajectory_csv, episode, t, result);
      reward_sum += result.reward;
      state = result.next_state;
    }
    trace.episodes.push_back({reward_sum / env.config().episode_length, agent.mean_std()});
  }
  if (opts.checkpoint_sink) agent.save(*opts.checkpoint_sink);
  return trace;
}

}  // namespace

RunTrace run_mpt(const EnvConfig& env_cfg, const TrainOptions& opts) {
  return run_baseline(Scheme::Mpt, env_cfg, opts);
}

RunTrace run_rss(const EnvConfig& env_cfg, const TrainOptions& opts) {
  return run_baseline(Scheme::Rss, env_cfg, opts);
}

RunTrace run_scheme(Scheme scheme, const EnvConfig& env_cfg, const TrainOptions& opts) {
  switch (scheme) {
    case Scheme::CDdpg:
    case Scheme::CPpo:
      return run_centralised(scheme, env_cfg, opts);
    case Scheme::PDdpg:
    case Scheme::PPpo:
      return run_parallel(scheme, env_cfg, opts);
    case Scheme::Mpt:
      return run_mpt(env_cfg, opts);
    case Scheme::Rss:
      return run_rss(env_cfg, opts);
  }
  throw std::logic_error("run_scheme: unknown scheme");
}

}  // namespace irsuav

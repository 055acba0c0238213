#include "irsuav/ppo.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace irsuav {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

std::vector<int> policy_layer_sizes(int state_dim, int action_dim,
                                    const std::vector<int>& hidden) {
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  return sizes;
}

std::vector<int> value_layer_sizes(int state_dim, const std::vector<int>& hidden) {
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

}  // namespace

GaussianPolicy::GaussianPolicy(int state_dim, int action_dim, const PpoConfig& cfg,
                               RngStream& init_rng)
    : mean_net_(make_mlp(policy_layer_sizes(state_dim, action_dim, cfg.hidden_sizes),
                         Activation::Tanh, init_rng, cfg.actor_init_scale)),
      log_std_(Eigen::VectorXd::Constant(action_dim, cfg.init_log_std)) {}

GaussianPolicy::Sample GaussianPolicy::act(const Eigen::VectorXd& state, RngStream& rng) const {
  Sample sample;
  const Eigen::VectorXd mu = mean(state);
  sample.action.resize(mu.size());
  sample.clamped.resize(mu.size());
  double log_prob = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double std_j = std::exp(log_std_[j]);
    const double z = rng.normal();
    sample.action[j] = mu[j] + std_j * z;
    sample.clamped[j] = std::clamp(sample.action[j], -1.0, 1.0);
    log_prob -= log_std_[j] + kHalfLog2Pi + 0.5 * z * z;
  }
  sample.log_prob = log_prob;
  return sample;
}

Eigen::VectorXd GaussianPolicy::mean(const Eigen::VectorXd& state) const {
  return forward_one(mean_net_, state);
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const {
  if (action.size() != log_std_.size())
    throw std::invalid_argument("GaussianPolicy::log_prob: action dimension mismatch");
  const Eigen::VectorXd mu = mean(state);
  double log_prob = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double z = (action[j] - mu[j]) / std::exp(log_std_[j]);
    log_prob -= log_std_[j] + kHalfLog2Pi + 0.5 * z * z;
  }
  return log_prob;
}

double advantage(double reward, const Eigen::VectorXd& state, const Eigen::VectorXd& next_state,
                 const Mlp& value_net, double zeta) {
  const double v_next = forward_one(value_net, next_state)[0];
  const double v = forward_one(value_net, state)[0];
  return reward + zeta * v_next - v;
}

double clipped_objective(double ratio, double adv, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * adv, clipped * adv);
}

PpoAgent::PpoAgent(int state_dim, int action_dim, const PpoConfig& cfg, RngStream& init_rng)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      cfg_(cfg),
      policy_(state_dim, action_dim, cfg, init_rng),
      value_net_(make_mlp(value_layer_sizes(state_dim, cfg.hidden_sizes), Activation::Identity,
                          init_rng)),
      policy_opt_(AdamState::for_mlp(policy_.mean_net(), cfg.policy_lr)),
      value_opt_(AdamState::for_mlp(value_net_, cfg.value_lr)),
      log_std_opt_(AdamVecState::for_vector(action_dim, cfg.policy_lr)) {
  if (state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("PpoAgent: dimensions must be >= 1");
}

GaussianPolicy::Sample PpoAgent::act(const Eigen::VectorXd& state, RngStream& rng) const {
  return policy_.act(state, rng);
}

void PpoAgent::store(RolloutEntry entry) { rollout_.push(std::move(entry)); }

double PpoAgent::ratio(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                       double log_prob_old) const {
  return std::exp(policy_.log_prob(state, action) - log_prob_old);
}

double PpoAgent::mean_std() const { return policy_.log_std().array().exp().mean(); }

std::optional<PpoDiagnostics> PpoAgent::update(RngStream& rng) {
  if (rollout_.empty()) return std::nullopt;
  const std::vector<RolloutEntry>& entries = rollout_.entries();
  const auto count = static_cast<Eigen::Index>(entries.size());

  Eigen::MatrixXd states(state_dim_, count);
  Eigen::MatrixXd next_states(state_dim_, count);
  Eigen::MatrixXd actions(action_dim_, count);
  Eigen::VectorXd rewards(count), log_prob_old(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const RolloutEntry& e = entries[static_cast<std::size_t>(i)];
    states.col(i) = e.state;
    next_states.col(i) = e.next_state;
    actions.col(i) = e.action;
    rewards[i] = e.reward;
    log_prob_old[i] = e.log_prob_old;
  }

  // One-step TD targets and advantages from the pre-update value net; the
  // targets stay frozen across epochs.
  const Eigen::VectorXd v = forward(value_net_, states).row(0).transpose();
  const Eigen::VectorXd v_next = forward(value_net_, next_states).row(0).transpose();
  const Eigen::VectorXd targets = rewards + cfg_.discount * v_next;
  const Eigen::VectorXd raw_adv = targets - v;

  PpoDiagnostics diag;
  diag.value_loss_before = raw_adv.squaredNorm() / static_cast<double>(count);

  const double adv_mean = raw_adv.mean();
  const double adv_std =
      std::sqrt((raw_adv.array() - adv_mean).square().sum() / static_cast<double>(count));
  const Eigen::VectorXd adv = (raw_adv.array() - adv_mean) / (adv_std + 1e-8);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    // Fisher-Yates shuffle on the deterministic stream.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);

    for (Eigen::Index start = 0; start < count; start += cfg_.minibatch) {
      const auto batch = std::min<Eigen::Index>(cfg_.minibatch, count - start);
      Eigen::MatrixXd sb(state_dim_, batch);
      Eigen::MatrixXd ab(action_dim_, batch);
      Eigen::VectorXd adv_b(batch), lp_old_b(batch), target_b(batch);
      for (Eigen::Index i = 0; i < batch; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + i)];
        sb.col(i) = states.col(src);
        ab.col(i) = actions.col(src);
        adv_b[i] = adv[src];
        lp_old_b[i] = log_prob_old[src];
        target_b[i] = targets[src];
      }
      const double inv_batch = 1.0 / static_cast<double>(batch);

      // Policy: maximise the clipped surrogate.
      ForwardCache policy_cache;
      const Eigen::MatrixXd mu = forward(policy_.mean_net(), sb, &policy_cache);
      const Eigen::ArrayXd std_dev = policy_.log_std().array().exp();
      Eigen::MatrixXd mean_seed(action_dim_, batch);
      Eigen::VectorXd log_std_grad = Eigen::VectorXd::Zero(action_dim_);
      for (Eigen::Index i = 0; i < batch; ++i) {
        const Eigen::ArrayXd z = (ab.col(i) - mu.col(i)).array() / std_dev;
        const double lp_new =
            -(policy_.log_std().array() + kHalfLog2Pi + 0.5 * z.square()).sum();
        const double ratio_i = std::exp(lp_new - lp_old_b[i]);
        const double clipped = std::clamp(ratio_i, 1.0 - cfg_.clip_epsilon, 1.0 + cfg_.clip_epsilon);
        // min() branch: inside the band both arguments agree, outside the
        // clipped branch is constant, so its gradient vanishes.
        const bool unclipped_active = ratio_i * adv_b[i] <= clipped * adv_b[i];
        const double dobj_dlp = unclipped_active ? ratio_i * adv_b[i] : 0.0;
        const double seed_scale = -inv_batch * dobj_dlp;  // minimise the negative surrogate
        mean_seed.col(i) = (seed_scale * z / std_dev).matrix();
        log_std_grad.array() += seed_scale * (z.square() - 1.0);
      }
      MlpGrads policy_grads = backward(policy_.mean_net(), policy_cache, mean_seed);
      adam_step(policy_.mean_net(), policy_grads, policy_opt_);
      adam_step(policy_.log_std(), log_std_grad, log_std_opt_);
      policy_.log_std() =
          policy_.log_std().cwiseMax(cfg_.log_std_min).cwiseMin(cfg_.log_std_max);

      // Value net: descend the mean squared TD error against frozen targets.
      ForwardCache value_cache;
      const Eigen::MatrixXd vb = forward(value_net_, sb, &value_cache);
      Eigen::MatrixXd value_seed(1, batch);
      for (Eigen::Index i = 0; i < batch; ++i)
        value_seed(0, i) = 2.0 * (vb(0, i) - target_b[i]) * inv_batch;
      MlpGrads value_grads = backward(value_net_, value_cache, value_seed);
      adam_step(value_net_, value_grads, value_opt_);

      ++diag.minibatch_updates;
    }
  }

  // Post-update ratio distribution and surrogate over the whole rollout.
  const Eigen::MatrixXd mu_after = forward(policy_.mean_net(), states);
  const Eigen::ArrayXd std_after = policy_.log_std().array().exp();
  double surrogate = 0.0;
  Eigen::Index in_band = 0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::ArrayXd z = (actions.col(i) - mu_after.col(i)).array() / std_after;
    const double lp_new = -(policy_.log_std().array() + kHalfLog2Pi + 0.5 * z.square()).sum();
    const double ratio_i = std::exp(lp_new - log_prob_old[i]);
    surrogate += clipped_objective(ratio_i, adv[i], cfg_.clip_epsilon);
    if (ratio_i >= 1.0 - cfg_.clip_epsilon && ratio_i <= 1.0 + cfg_.clip_epsilon) ++in_band;
  }
  diag.surrogate_after = surrogate / static_cast<double>(count);
  diag.ratio_in_band_frac = static_cast<double>(in_band) / static_cast<double>(count);

  rollout_.clear();
  return diag;
}

void PpoAgent::save(std::ostream& out) const {
  save_mlp(out, policy_.mean_net());
  save_mlp(out, value_net_);
  out << "log-std ";
  out << policy_.log_std().size();
  for (Eigen::Index i = 0; i < policy_.log_std().size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), " %a", policy_.log_std()[i]);
    out << buf;
  }
  out << '\n';
  save_adam(out, policy_opt_);
  save_adam(out, value_opt_);
}

void PpoAgent::load(std::istream& in) {
  policy_.mean_net() = load_mlp(in);
  value_net_ = load_mlp(in);
  std::string token;
  if (!(in >> token) || token != "log-std")
    throw std::runtime_error("checkpoint: expected log-std section");
  Eigen::Index size = 0;
  in >> size;
  if (size != action_dim_) throw std::runtime_error("checkpoint: log-std size mismatch");
  for (Eigen::Index i = 0; i < size; ++i) {
    if (!(in >> token)) throw std::runtime_error("checkpoint: truncated log-std");
    policy_.log_std()[i] = std::strtod(token.c_str(), nullptr);
  }
  policy_opt_ = load_adam(in, policy_.mean_net());
  value_opt_ = load_adam(in, value_net_);
}

}  // namespace irsuav

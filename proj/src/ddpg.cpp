#include "irsuav/ddpg.hpp"

#include <algorithm>
#include <stdexcept>

namespace irsuav {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  storage_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::store(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, RngStream& rng) const {
  if (storage_.empty()) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) out.push_back(&storage_[rng.index(storage_.size())]);
  return out;
}

namespace {

std::vector<int> actor_layer_sizes(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  return sizes;
}

std::vector<int> critic_layer_sizes(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> sizes{state_dim + action_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

}  // namespace

DdpgAgent::DdpgAgent(int state_dim, int action_dim, const DdpgConfig& cfg, RngStream& init_rng)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      cfg_(cfg),
      actor_(make_mlp(actor_layer_sizes(state_dim, action_dim, cfg.hidden_sizes),
                      Activation::Tanh, init_rng, cfg.actor_init_scale)),
      critic_(make_mlp(critic_layer_sizes(state_dim, action_dim, cfg.hidden_sizes),
                       Activation::Identity, init_rng)),
      actor_target_(actor_),
      critic_target_(critic_),
      actor_opt_(AdamState::for_mlp(actor_, cfg.actor_lr)),
      critic_opt_(AdamState::for_mlp(critic_, cfg.critic_lr)),
      noise_scale_(cfg.noise_scale) {
  if (state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("DdpgAgent: dimensions must be >= 1");
}

Eigen::VectorXd DdpgAgent::act(const Eigen::VectorXd& state) const {
  return forward_one(actor_, state);
}

Eigen::VectorXd DdpgAgent::act_with_noise(const Eigen::VectorXd& state, RngStream& rng) {
  Eigen::VectorXd action = act(state);
  for (Eigen::Index i = 0; i < action.size(); ++i)
    action[i] = std::clamp(action[i] + noise_scale_ * rng.normal(), -1.0, 1.0);
  noise_scale_ *= cfg_.noise_decay;
  return action;
}

std::vector<double> DdpgAgent::critic_targets(const std::vector<const Transition*>& batch) const {
  const auto count = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd next_states(state_dim_, count);
  for (Eigen::Index i = 0; i < count; ++i) next_states.col(i) = batch[i]->next_state;
  const Eigen::MatrixXd next_actions = forward(actor_target_, next_states);
  Eigen::MatrixXd critic_in(state_dim_ + action_dim_, count);
  critic_in.topRows(state_dim_) = next_states;
  critic_in.bottomRows(action_dim_) = next_actions;
  const Eigen::MatrixXd next_q = forward(critic_target_, critic_in);
  std::vector<double> targets(batch.size());
  for (Eigen::Index i = 0; i < count; ++i)
    targets[static_cast<std::size_t>(i)] = batch[i]->reward + cfg_.discount * next_q(0, i);
  return targets;
}

std::optional<DdpgDiagnostics> DdpgAgent::train_step(const ReplayBuffer& buffer, RngStream& rng) {
  const auto batch_size = static_cast<std::size_t>(cfg_.batch_size);
  if (buffer.size() < batch_size) return std::nullopt;

  const std::vector<const Transition*> batch = buffer.sample(batch_size, rng);
  const auto count = static_cast<Eigen::Index>(batch.size());
  const std::vector<double> targets = critic_targets(batch);

  Eigen::MatrixXd states(state_dim_, count);
  Eigen::MatrixXd critic_in(state_dim_ + action_dim_, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    states.col(i) = batch[i]->state;
    critic_in.col(i).head(state_dim_) = batch[i]->state;
    critic_in.col(i).tail(action_dim_) = batch[i]->action;
  }

  // Critic: minimise the mean squared TD error over the minibatch.
  ForwardCache critic_cache;
  const Eigen::MatrixXd q = forward(critic_, critic_in, &critic_cache);
  Eigen::MatrixXd critic_seed(1, count);
  double critic_loss = 0.0;
  const double inv_count = 1.0 / static_cast<double>(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double diff = q(0, i) - targets[static_cast<std::size_t>(i)];
    critic_loss += diff * diff * inv_count;
    critic_seed(0, i) = 2.0 * diff * inv_count;
  }
  MlpGrads critic_grads = backward(critic_, critic_cache, critic_seed);
  clip_global_norm(critic_grads, cfg_.grad_clip_norm);
  adam_step(critic_, critic_grads, critic_opt_);

  // Actor: ascend the critic's value at mu(s). The chain rule runs through
  // the critic's input gradient into the actor parameters.
  ForwardCache actor_cache;
  const Eigen::MatrixXd proposed = forward(actor_, states, &actor_cache);
  Eigen::MatrixXd actor_critic_in(state_dim_ + action_dim_, count);
  actor_critic_in.topRows(state_dim_) = states;
  actor_critic_in.bottomRows(action_dim_) = proposed;
  ForwardCache chain_cache;
  forward(critic_, actor_critic_in, &chain_cache);
  const Eigen::MatrixXd ascend_seed = Eigen::MatrixXd::Constant(1, count, -inv_count);
  Eigen::MatrixXd input_grad;
  backward(critic_, chain_cache, ascend_seed, &input_grad);
  MlpGrads actor_grads =
      backward(actor_, actor_cache, input_grad.bottomRows(action_dim_));
  clip_global_norm(actor_grads, cfg_.grad_clip_norm);
  adam_step(actor_, actor_grads, actor_opt_);

  soft_update(critic_target_, critic_, cfg_.target_mix);
  soft_update(actor_target_, actor_, cfg_.target_mix);

  return DdpgDiagnostics{critic_loss};
}

void DdpgAgent::save(std::ostream& out) const {
  save_mlp(out, actor_);
  save_mlp(out, critic_);
  save_mlp(out, actor_target_);
  save_mlp(out, critic_target_);
  save_adam(out, actor_opt_);
  save_adam(out, critic_opt_);
}

void DdpgAgent::load(std::istream& in) {
  actor_ = load_mlp(in);
  critic_ = load_mlp(in);
  actor_target_ = load_mlp(in);
  critic_target_ = load_mlp(in);
  actor_opt_ = load_adam(in, actor_);
  critic_opt_ = load_adam(in, critic_);
}

}  // namespace irsuav

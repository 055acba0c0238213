#include <doctest.h>

#include <cmath>
#include <sstream>

#include "irsuav/ddpg.hpp"

using irsuav::DdpgAgent;
using irsuav::DdpgConfig;
using irsuav::ReplayBuffer;
using irsuav::RngStream;
using irsuav::Transition;

namespace {

Eigen::VectorXd random_vector(int dim, RngStream& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-1, 1);
  return v;
}

Transition make_transition(int state_dim, int action_dim, double tag, RngStream& rng) {
  Transition t;
  t.state = random_vector(state_dim, rng);
  t.action = random_vector(action_dim, rng);
  t.next_state = random_vector(state_dim, rng);
  t.reward = tag;
  return t;
}

DdpgConfig small_config() {
  DdpgConfig cfg;
  cfg.hidden_sizes = {8, 8};
  cfg.batch_size = 4;
  cfg.replay_capacity = 64;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("ddpg");

TEST_CASE("replay buffer ring semantics") {
  RngStream rng(101);
  ReplayBuffer buffer(3);
  for (int i = 0; i < 4; ++i) buffer.store(make_transition(2, 1, i, rng));
  CHECK(buffer.size() == 3);
  // The oldest entry (reward 0) was overwritten in place by reward 3.
  CHECK(buffer.at(0).reward == 3.0);
  CHECK(buffer.at(1).reward == 1.0);
  CHECK(buffer.at(2).reward == 2.0);
}

TEST_CASE("sampling from a single-entry buffer repeats it") {
  RngStream rng(102);
  ReplayBuffer buffer(8);
  buffer.store(make_transition(2, 1, 42.0, rng));
  const auto batch = buffer.sample(5, rng);
  REQUIRE(batch.size() == 5);
  for (const auto* t : batch) CHECK(t->reward == 42.0);
}

TEST_CASE("sampled indices are uniform (chi-square, 15 dof)") {
  RngStream fill_rng(103);
  ReplayBuffer buffer(16);
  for (int i = 0; i < 16; ++i) buffer.store(make_transition(1, 1, i, fill_rng));
  RngStream rng(104);
  const int draws = 100000;
  std::vector<int> counts(16, 0);
  for (int i = 0; i < draws / 16; ++i)
    for (const auto* t : buffer.sample(16, rng)) ++counts[static_cast<int>(t->reward)];
  const double expected = static_cast<double>(draws) / 16.0;
  double statistic = 0.0;
  for (int c : counts) statistic += (c - expected) * (c - expected) / expected;
  // 30.578 is the 99th percentile of chi-square with 15 degrees of freedom.
  CHECK(statistic < 30.578);
}

TEST_CASE("actions") {
  RngStream init(105);
  DdpgConfig cfg = small_config();
  cfg.noise_scale = 0.0;
  DdpgAgent agent(3, 2, cfg, init);
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(3, 0.4);

  SUBCASE("zero noise reproduces the deterministic policy") {
    RngStream rng(106);
    CHECK((agent.act_with_noise(s, rng) - agent.act(s)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fresh agents act near the action-space centre") {
    CHECK(agent.act(s).cwiseAbs().maxCoeff() < 0.05);
  }
  SUBCASE("noisy actions stay clamped") {
    DdpgConfig noisy = small_config();
    noisy.noise_scale = 3.0;
    RngStream init2(107);
    DdpgAgent loud(3, 2, noisy, init2);
    RngStream rng(108);
    for (int i = 0; i < 200; ++i) {
      const Eigen::VectorXd a = loud.act_with_noise(s, rng);
      CHECK(a.maxCoeff() <= 1.0);
      CHECK(a.minCoeff() >= -1.0);
    }
  }
}

TEST_CASE("noise scale decays multiplicatively per call") {
  DdpgConfig cfg = small_config();
  cfg.noise_scale = 3.0;
  cfg.noise_decay = 0.99995;
  RngStream init(109);
  DdpgAgent agent(2, 1, cfg, init);
  RngStream rng(110);
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < 10000; ++i) agent.act_with_noise(s, rng);
  CHECK(agent.noise_scale() ==
        doctest::Approx(3.0 * std::pow(0.99995, 10000)).epsilon(1e-9));
  CHECK(agent.noise_scale() == doctest::Approx(1.8196).epsilon(1e-3));
}

TEST_CASE("critic targets") {
  RngStream init(111);
  DdpgConfig cfg = small_config();

  SUBCASE("zero discount returns the rewards") {
    cfg.discount = 0.0;
    DdpgAgent agent(2, 1, cfg, init);
    RngStream rng(112);
    ReplayBuffer buffer(8);
    for (int i = 0; i < 4; ++i) buffer.store(make_transition(2, 1, 0.5 * i, rng));
    const auto batch = buffer.sample(4, rng);
    const auto targets = agent.critic_targets(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK(targets[i] == batch[i]->reward);
  }
  SUBCASE("random batch matches a per-sample recompute") {
    cfg.discount = 0.9;
    DdpgAgent agent(2, 1, cfg, init);
    RngStream rng(113);
    ReplayBuffer buffer(8);
    for (int i = 0; i < 6; ++i) buffer.store(make_transition(2, 1, 0.3 * i, rng));
    const auto batch = buffer.sample(5, rng);
    const auto targets = agent.critic_targets(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const Eigen::VectorXd next_action = irsuav::forward_one(agent.actor_target(), batch[i]->next_state);
      Eigen::VectorXd critic_in(3);
      critic_in << batch[i]->next_state, next_action;
      const double q = irsuav::forward_one(agent.critic_target(), critic_in)[0];
      CHECK(targets[i] == doctest::Approx(batch[i]->reward + 0.9 * q).epsilon(1e-12));
    }
  }
}

TEST_CASE("train step") {
  SUBCASE("underfull buffer skips with a signal") {
    RngStream init(114);
    DdpgAgent agent(2, 1, small_config(), init);
    ReplayBuffer buffer(8);
    RngStream rng(115);
    buffer.store(make_transition(2, 1, 1.0, rng));
    CHECK_FALSE(agent.train_step(buffer, rng).has_value());
  }
  SUBCASE("reported critic loss matches the sampled batch") {
    RngStream init(116);
    DdpgAgent agent(2, 1, small_config(), init);
    ReplayBuffer buffer(32);
    RngStream rng(117);
    for (int i = 0; i < 16; ++i) buffer.store(make_transition(2, 1, 0.1 * i, rng));

    RngStream replay = rng;  // same stream state the update will consume
    const auto batch = buffer.sample(4, replay);
    const auto targets = agent.critic_targets(batch);
    double expected_loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      Eigen::VectorXd critic_in(3);
      critic_in << batch[i]->state, batch[i]->action;
      const double q = irsuav::forward_one(agent.critic(), critic_in)[0];
      expected_loss += (targets[i] - q) * (targets[i] - q) / 4.0;
    }
    const auto diag = agent.train_step(buffer, rng);
    REQUIRE(diag.has_value());
    CHECK(diag->critic_loss == doctest::Approx(expected_loss).epsilon(1e-12));
  }
  SUBCASE("unit target mix copies the online networks") {
    DdpgConfig cfg = small_config();
    cfg.target_mix = 1.0;
    RngStream init(118);
    DdpgAgent agent(2, 1, cfg, init);
    ReplayBuffer buffer(32);
    RngStream rng(119);
    for (int i = 0; i < 8; ++i) buffer.store(make_transition(2, 1, 0.2 * i, rng));
    REQUIRE(agent.train_step(buffer, rng).has_value());
    for (std::size_t l = 0; l < agent.actor().layer_count(); ++l) {
      CHECK((agent.actor_target().weights[l] - agent.actor().weights[l]).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK((agent.critic_target().weights[l] - agent.critic().weights[l]).cwiseAbs().maxCoeff() ==
            0.0);
    }
  }
  SUBCASE("critic loss falls over 100 steps against frozen targets") {
    DdpgConfig cfg = small_config();
    cfg.target_mix = 0.0;  // frozen targets
    RngStream init(120);
    DdpgAgent agent(3, 2, cfg, init);
    ReplayBuffer buffer(64);
    RngStream rng(121);
    for (int i = 0; i < 64; ++i) buffer.store(make_transition(3, 2, rng.uniform(0, 1), rng));

    const auto held_out = buffer.sample(16, rng);
    const auto loss_on = [&](const DdpgAgent& a) {
      const auto targets = a.critic_targets(held_out);
      double loss = 0.0;
      for (std::size_t i = 0; i < held_out.size(); ++i) {
        Eigen::VectorXd critic_in(5);
        critic_in << held_out[i]->state, held_out[i]->action;
        const double q = irsuav::forward_one(a.critic(), critic_in)[0];
        loss += (targets[i] - q) * (targets[i] - q) / held_out.size();
      }
      return loss;
    };
    const double before = loss_on(agent);
    for (int i = 0; i < 100; ++i) agent.train_step(buffer, rng);
    CHECK(loss_on(agent) < before);
  }
}

TEST_CASE("actor gradient matches finite differences of the critic objective") {
  // Assemble the deterministic-policy chain from the public pieces and
  // compare against central differences of J = mean Q(s, mu(s)).
  RngStream init(122);
  DdpgConfig cfg;
  cfg.hidden_sizes = {4};
  DdpgAgent agent(3, 2, cfg, init);
  RngStream rng(123);
  const int batch = 5;
  Eigen::MatrixXd states(3, batch);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < batch; ++c) states(r, c) = rng.uniform(-1, 1);

  const auto objective = [&](const irsuav::Mlp& actor) {
    const Eigen::MatrixXd actions = irsuav::forward(actor, states);
    Eigen::MatrixXd critic_in(5, batch);
    critic_in.topRows(3) = states;
    critic_in.bottomRows(2) = actions;
    return irsuav::forward(agent.critic(), critic_in).sum() / batch;
  };

  irsuav::ForwardCache actor_cache;
  const Eigen::MatrixXd actions = irsuav::forward(agent.actor(), states, &actor_cache);
  Eigen::MatrixXd critic_in(5, batch);
  critic_in.topRows(3) = states;
  critic_in.bottomRows(2) = actions;
  irsuav::ForwardCache critic_cache;
  irsuav::forward(agent.critic(), critic_in, &critic_cache);
  Eigen::MatrixXd input_grad;
  irsuav::backward(agent.critic(), critic_cache,
                   Eigen::MatrixXd::Constant(1, batch, 1.0 / batch), &input_grad);
  const irsuav::MlpGrads grads =
      irsuav::backward(agent.actor(), actor_cache, input_grad.bottomRows(2));

  irsuav::Mlp probe = agent.actor();
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t l = 0; l < probe.layer_count(); ++l)
    for (Eigen::Index r = 0; r < probe.weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < probe.weights[l].cols(); ++c) {
        probe.weights[l](r, c) += h;
        const double up = objective(probe);
        probe.weights[l](r, c) -= 2 * h;
        const double down = objective(probe);
        probe.weights[l](r, c) += h;
        worst = std::max(worst, std::abs((up - down) / (2 * h) - grads.weights[l](r, c)));
      }
  CHECK(worst < 1e-6);
}

TEST_CASE("checkpoint round trip preserves behaviour") {
  RngStream init(124);
  DdpgAgent agent(3, 2, small_config(), init);
  ReplayBuffer buffer(32);
  RngStream rng(125);
  for (int i = 0; i < 8; ++i) buffer.store(make_transition(3, 2, 0.1 * i, rng));
  agent.train_step(buffer, rng);

  std::stringstream out;
  agent.save(out);
  RngStream init2(999);
  DdpgAgent restored(3, 2, small_config(), init2);
  restored.load(out);
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(3, 0.2);
  CHECK((restored.act(s) - agent.act(s)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_SUITE_END();

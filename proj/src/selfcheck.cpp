#include "irsuav/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "irsuav/ddpg.hpp"
#include "irsuav/environment.hpp"
#include "irsuav/metrics.hpp"
#include "irsuav/mlp.hpp"
#include "irsuav/ppo.hpp"
#include "irsuav/schemes.hpp"

namespace irsuav {

namespace {

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
  return std::abs(a - b) / scale;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Straight-line recompute of one instance's metrics with explicit
// real/imaginary doubles; no std::complex, no shared helpers.
struct OracleMetrics {
  std::vector<double> sinr;
  std::vector<double> rate;
  double total_rate = 0.0;
  double total_power = 0.0;
  double ee = 0.0;
};

OracleMetrics oracle_metrics(const NetworkConfig& cfg, const ChannelRealization& real,
                             const PowerAllocation& powers, const PhaseShifts& phases) {
  const int n_clusters = cfg.clusters;
  const int n_ues = cfg.ues_per_cluster;
  const int k_elems = cfg.irs_elements;
  OracleMetrics out;
  for (int n = 0; n < n_clusters; ++n) {
    for (int m = 0; m < n_ues; ++m) {
      double signal = 0.0;
      double interference = 0.0;
      for (int i = 0; i < n_clusters; ++i) {
        double sum_re = 0.0;
        double sum_im = 0.0;
        for (int k = 0; k < k_elems; ++k) {
          const double h_re = real.aa[i][k].real();
          const double h_im = real.aa[i][k].imag();
          const double g_re = real.ag[n][m][k].real();
          const double g_im = real.ag[n][m][k].imag();
          const double c = std::cos(phases.theta()[k]);
          const double s = std::sin(phases.theta()[k]);
          const double a_re = h_re * c - h_im * s;
          const double a_im = h_re * s + h_im * c;
          sum_re += a_re * g_re - a_im * g_im;
          sum_im += a_re * g_im + a_im * g_re;
        }
        const double mag2 = sum_re * sum_re + sum_im * sum_im;
        if (i == n)
          signal = powers.p[i] * mag2;
        else
          interference += powers.p[i] * mag2;
      }
      const double gamma = signal / (interference + cfg.noise_w);
      out.sinr.push_back(gamma);
      out.rate.push_back(cfg.bandwidth_hz * std::log(1.0 + gamma) / std::log(2.0));
      out.total_rate += out.rate.back();
    }
  }
  out.total_power = cfg.p_fixed_w;
  for (double p : powers.p) out.total_power += p;
  out.ee = out.total_rate / out.total_power;
  return out;
}

ChannelRealization random_realization(int n_clusters, int n_ues, int k_elems, RngStream& rng) {
  ChannelRealization real;
  for (int n = 0; n < n_clusters; ++n) {
    ComplexVector v(k_elems);
    for (auto& e : v) e = rng.cnormal();
    real.aa.push_back(std::move(v));
  }
  real.ag.resize(n_clusters);
  for (int n = 0; n < n_clusters; ++n)
    for (int m = 0; m < n_ues; ++m) {
      ComplexVector v(k_elems);
      for (auto& e : v) e = rng.cnormal();
      real.ag[n].push_back(std::move(v));
    }
  return real;
}

}  // namespace

std::vector<CheckResult> metric_oracle_suite(int instances, std::uint64_t seed, double tolerance) {
  RngStream rng(seed);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < instances; ++i) {
    NetworkConfig cfg;
    cfg.clusters = 1 + static_cast<int>(rng.index(3));
    cfg.ues_per_cluster = 1 + static_cast<int>(rng.index(4));
    cfg.irs_elements = 1 + static_cast<int>(rng.index(8));
    cfg.bandwidth_hz = 1e6;
    cfg.p_max_w = 5.0;
    cfg.p_fixed_w = 4.0;
    cfg.noise_w = 3.9810717055349694e-17;

    const ChannelRealization real =
        random_realization(cfg.clusters, cfg.ues_per_cluster, cfg.irs_elements, rng);
    PowerAllocation powers;
    for (int n = 0; n < cfg.clusters; ++n) powers.p.push_back(rng.uniform(0.0, cfg.p_max_w));
    std::vector<double> theta;
    for (int k = 0; k < cfg.irs_elements; ++k)
      theta.push_back(rng.uniform(0.0, 2.0 * 3.141592653589793));
    const PhaseShifts phases(theta);

    const MetricsReport report = compute_metrics(cfg, real, powers, phases);
    const OracleMetrics oracle = oracle_metrics(cfg, real, powers, phases);

    for (std::size_t j = 0; j < report.sinr.size(); ++j) {
      worst = std::max(worst, rel_err(report.sinr[j], oracle.sinr[j]));
      worst = std::max(worst, rel_err(report.rate[j], oracle.rate[j]));
    }
    worst = std::max(worst, rel_err(report.total_rate, oracle.total_rate));
    worst = std::max(worst, rel_err(report.total_power, oracle.total_power));
    worst = std::max(worst, rel_err(report.ee, oracle.ee));

    // Totals must equal the left-to-right sums of the per-UE entries exactly.
    double rate_sum = 0.0;
    for (double r : report.rate) rate_sum += r;
    if (rate_sum != report.total_rate) ++failures;
    if (worst > tolerance) ++failures;
  }
  CheckResult result{"metric-oracle", failures == 0,
                     std::to_string(instances) + " instances, worst rel err " + fmt(worst)};
  return {result};
}

std::vector<CheckResult> gradient_check_suite(std::uint64_t seed, double tolerance) {
  RngStream rng(seed);
  std::vector<CheckResult> results;

  struct Case {
    const char* name;
    std::vector<int> sizes;
    Activation output;
    bool check_input_grad;
  };
  const Case cases[] = {
      {"gradient-actor", {5, 8, 3}, Activation::Tanh, false},
      {"gradient-critic", {8, 16, 8, 1}, Activation::Identity, true},
      {"gradient-value", {6, 16, 1}, Activation::Identity, false},
      {"gradient-policy-mean", {4, 8, 8, 2}, Activation::Tanh, false},
  };

  const double h = 1e-5;
  for (const Case& c : cases) {
    Mlp net = make_mlp(c.sizes, c.output, rng);
    const int batch = 3;
    Eigen::MatrixXd input(c.sizes.front(), batch);
    for (Eigen::Index r = 0; r < input.rows(); ++r)
      for (Eigen::Index col = 0; col < input.cols(); ++col)
        input(r, col) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd loss_seed(c.sizes.back(), batch);
    for (Eigen::Index r = 0; r < loss_seed.rows(); ++r)
      for (Eigen::Index col = 0; col < loss_seed.cols(); ++col)
        loss_seed(r, col) = rng.uniform(-1.0, 1.0);

    const auto loss = [&](const Mlp& candidate) {
      return (forward(candidate, input).array() * loss_seed.array()).sum();
    };

    ForwardCache cache;
    forward(net, input, &cache);
    Eigen::MatrixXd input_grad;
    const MlpGrads grads = backward(net, cache, loss_seed, &input_grad);

    double worst = 0.0;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r)
        for (Eigen::Index col = 0; col < net.weights[l].cols(); ++col) {
          Mlp probe = net;
          probe.weights[l](r, col) += h;
          const double up = loss(probe);
          probe.weights[l](r, col) -= 2.0 * h;
          const double down = loss(probe);
          const double fd = (up - down) / (2.0 * h);
          const double analytic = grads.weights[l](r, col);
          worst = std::max(worst, std::abs(analytic - fd) /
                                      std::max({std::abs(analytic), std::abs(fd), 1e-6}));
        }
      for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
        Mlp probe = net;
        probe.biases[l][r] += h;
        const double up = loss(probe);
        probe.biases[l][r] -= 2.0 * h;
        const double down = loss(probe);
        const double fd = (up - down) / (2.0 * h);
        const double analytic = grads.biases[l][r];
        worst = std::max(worst, std::abs(analytic - fd) /
                                    std::max({std::abs(analytic), std::abs(fd), 1e-6}));
      }
    }
    if (c.check_input_grad) {
      for (Eigen::Index r = 0; r < input.rows(); ++r)
        for (Eigen::Index col = 0; col < input.cols(); ++col) {
          Eigen::MatrixXd probe = input;
          probe(r, col) += h;
          const double up = (forward(net, probe).array() * loss_seed.array()).sum();
          probe(r, col) -= 2.0 * h;
          const double down = (forward(net, probe).array() * loss_seed.array()).sum();
          const double fd = (up - down) / (2.0 * h);
          const double analytic = input_grad(r, col);
          worst = std::max(worst, std::abs(analytic - fd) /
                                      std::max({std::abs(analytic), std::abs(fd), 1e-6}));
        }
    }
    results.push_back({c.name, worst < tolerance, "worst rel err " + fmt(worst)});
  }
  return results;
}

std::vector<CheckResult> invariant_suite(std::uint64_t seed) {
  std::vector<CheckResult> results;
  RngStream rng(seed);

  {  // Coherent alignment attains the triangle-inequality bound.
    const int k_elems = 8;
    ComplexVector h_ai(k_elems), h_ig(k_elems);
    for (auto& e : h_ai) e = rng.cnormal();
    for (auto& e : h_ig) e = rng.cnormal();
    std::vector<double> aligned(k_elems);
    double bound = 0.0;
    for (int k = 0; k < k_elems; ++k) {
      aligned[k] = -(std::arg(h_ai[k]) + std::arg(h_ig[k]));
      bound += std::abs(h_ai[k]) * std::abs(h_ig[k]);
    }
    const double attained = std::abs(effective_channel(h_ai, PhaseShifts(aligned), h_ig));
    bool pass = rel_err(attained, bound) < 1e-12;
    for (int trial = 0; trial < 1000 && pass; ++trial) {
      std::vector<double> theta(k_elems);
      for (auto& t : theta) t = rng.uniform(0.0, 2.0 * 3.141592653589793);
      if (std::abs(effective_channel(h_ai, PhaseShifts(theta), h_ig)) > bound * (1.0 + 1e-12))
        pass = false;
    }
    results.push_back({"coherent-alignment-bound", pass,
                       "bound " + fmt(bound) + ", attained " + fmt(attained)});
  }

  {  // min-form of the clipped objective equals the split-branch bounds.
    bool pass = true;
    for (int trial = 0; trial < 10000; ++trial) {
      const double p = rng.uniform(0.0, 3.0);
      const double adv = rng.uniform(-2.0, 2.0);
      const double eps = rng.uniform(0.05, 0.5);
      const double via_min = clipped_objective(p, adv, eps);
      const double split = adv >= 0.0 ? std::min(p, 1.0 + eps) * adv : std::max(p, 1.0 - eps) * adv;
      if (via_min != split) {
        pass = false;
        break;
      }
    }
    results.push_back({"clip-branch-agreement", pass, "10000 random (ratio, adv, eps) triples"});
  }

  {  // Ring buffer keeps exactly the most recent `capacity` transitions.
    ReplayBuffer buffer(3);
    for (int i = 0; i < 4; ++i) {
      Transition t;
      t.state = Eigen::VectorXd::Constant(1, static_cast<double>(i));
      t.action = Eigen::VectorXd::Zero(1);
      t.next_state = Eigen::VectorXd::Zero(1);
      t.reward = static_cast<double>(i);
      buffer.store(std::move(t));
    }
    bool pass = buffer.size() == 3;
    // Slot 0 was overwritten by the fourth transition.
    pass = pass && buffer.at(0).reward == 3.0 && buffer.at(1).reward == 1.0 &&
           buffer.at(2).reward == 2.0;
    results.push_back({"replay-eviction", pass, "capacity 3, stored 4"});
  }

  {  // Soft update contracts the target toward the online parameters.
    RngStream net_rng(seed ^ 0x51ebULL);
    const Mlp online = make_mlp({3, 4, 2}, Activation::Tanh, net_rng);
    Mlp target = make_mlp({3, 4, 2}, Activation::Tanh, net_rng);
    const Mlp before = target;
    const double mix = 0.25;
    soft_update(target, online, mix);
    bool pass = true;
    for (std::size_t l = 0; l < online.layer_count() && pass; ++l) {
      const Eigen::MatrixXd expect =
          mix * online.weights[l] + (1.0 - mix) * before.weights[l];
      if ((target.weights[l] - expect).cwiseAbs().maxCoeff() > 1e-15) pass = false;
      const Eigen::MatrixXd gap_new = target.weights[l] - online.weights[l];
      const Eigen::MatrixXd gap_old = before.weights[l] - online.weights[l];
      if ((gap_new - (1.0 - mix) * gap_old).cwiseAbs().maxCoeff() > 1e-12) pass = false;
    }
    Mlp snap = before;
    soft_update(snap, online, 1.0);
    for (std::size_t l = 0; l < online.layer_count() && pass; ++l)
      if ((snap.weights[l] - online.weights[l]).cwiseAbs().maxCoeff() != 0.0) pass = false;
    results.push_back({"soft-update-algebra", pass, "mix 0.25 contraction, mix 1 copy"});
  }

  {  // The state carries only the own-cluster compound channels: permuting an
     // interferer's UAV-IRS vector must leave the state alone yet change the
     // reward, given a constant own-channel for that interferer.
    NetworkConfig cfg;
    cfg.clusters = 2;
    cfg.ues_per_cluster = 1;
    cfg.irs_elements = 3;
    ChannelRealization real;
    real.aa = {{{0.3, 0.1}, {-0.2, 0.4}, {0.5, -0.3}}, {{0.7, 0.2}, {-0.1, -0.6}, {0.2, 0.3}}};
    real.ag.resize(2);
    real.ag[0] = {{{0.4, -0.2}, {0.1, 0.5}, {-0.3, 0.2}}};  // victim: non-constant
    real.ag[1] = {{{0.2, 0.1}, {0.2, 0.1}, {0.2, 0.1}}};    // interferer's own UE: constant
    const PhaseShifts phases = PhaseShifts::identity(3);
    PowerAllocation powers{{2.0, 3.0}};

    const Eigen::VectorXd state_before = state_features(real, phases);
    const double ee_before = energy_efficiency(cfg, real, powers, phases);
    std::swap(real.aa[1][0], real.aa[1][2]);
    const Eigen::VectorXd state_after = state_features(real, phases);
    const double ee_after = energy_efficiency(cfg, real, powers, phases);

    const bool pass = (state_before - state_after).cwiseAbs().maxCoeff() == 0.0 &&
                      std::abs(ee_before - ee_after) > 1e-3 * std::abs(ee_before);
    results.push_back({"state-information-hiding", pass,
                       "ee moved by " + fmt(std::abs(ee_before - ee_after))});
  }

  {  // Same seed, same actions: identical trajectories and traces.
    EnvConfig env_cfg;
    env_cfg.net.clusters = 1;
    env_cfg.net.ues_per_cluster = 2;
    env_cfg.net.irs_elements = 4;
    env_cfg.chan.elements = 4;
    env_cfg.uav_positions = {{0.0, 0.0, 200.0}};
    env_cfg.episode_length = 5;
    env_cfg.seed = 99;

    Environment env_a(env_cfg);
    Environment env_b(env_cfg);
    Eigen::VectorXd s_a = env_a.reset();
    Eigen::VectorXd s_b = env_b.reset();
    bool pass = (s_a - s_b).cwiseAbs().maxCoeff() == 0.0;
    RngStream action_rng(7);
    for (int t = 0; t < 5 && pass; ++t) {
      Eigen::VectorXd action(env_a.action_dim());
      for (Eigen::Index i = 0; i < action.size(); ++i) action[i] = action_rng.uniform(-1.0, 1.0);
      const StepResult ra = env_a.step(action);
      const StepResult rb = env_b.step(action);
      if (ra.reward != rb.reward) pass = false;
      if ((ra.next_state - rb.next_state).cwiseAbs().maxCoeff() != 0.0) pass = false;
    }

    TrainOptions opts;
    opts.episodes = 2;
    opts.seed = 5;
    opts.ddpg.hidden_sizes = {8, 8};
    opts.ppo.hidden_sizes = {8, 8};
    const RunTrace t1 = run_scheme(Scheme::CDdpg, env_cfg, opts);
    const RunTrace t2 = run_scheme(Scheme::CDdpg, env_cfg, opts);
    pass = pass && t1.episodes.size() == t2.episodes.size();
    for (std::size_t i = 0; i < t1.episodes.size() && pass; ++i)
      if (t1.episodes[i].mean_reward != t2.episodes[i].mean_reward) pass = false;
    results.push_back({"determinism-under-seed", pass, "env pairs and repeated c-ddpg runs"});
  }

  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace irsuav

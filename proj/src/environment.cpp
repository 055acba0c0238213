#include "irsuav/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsuav {

void EnvConfig::validate() const {
  net.validate();
  chan.validate();
  if (chan.elements != net.irs_elements)
    throw std::invalid_argument("EnvConfig: channel and network element counts differ");
  if (uav_positions.size() != static_cast<std::size_t>(net.clusters))
    throw std::invalid_argument("EnvConfig: need one UAV position per cluster");
  for (const Vec3& p : uav_positions)
    if (p.z < 0.0) throw std::invalid_argument("EnvConfig: UAV altitude must be >= 0");
  if (irs_position.z < 0.0) throw std::invalid_argument("EnvConfig: IRS altitude must be >= 0");
  if (!(cluster_radius_m > 0.0))
    throw std::invalid_argument("EnvConfig: cluster radius must be > 0");
  if (episode_length < 1) throw std::invalid_argument("EnvConfig: episode length must be >= 1");
}

Eigen::VectorXd state_features(const ChannelRealization& real, const PhaseShifts& phases) {
  const std::size_t clusters = real.aa.size();
  const std::size_t ues = clusters > 0 ? real.ag[0].size() : 0;
  Eigen::VectorXd features(static_cast<Eigen::Index>(2 * clusters * ues));
  Eigen::Index i = 0;
  for (std::size_t n = 0; n < clusters; ++n) {
    for (std::size_t m = 0; m < ues; ++m) {
      const ComplexScalar g = effective_channel(real.aa[n], phases, real.ag[n][m]);
      features[i++] = g.real();
      features[i++] = g.imag();
    }
  }
  return features;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate();
}

Eigen::VectorXd Environment::reset() {
  const int n_clusters = cfg_.net.clusters;
  const int n_ues = cfg_.net.ues_per_cluster;

  ue_positions_.assign(static_cast<std::size_t>(n_clusters), {});
  for (int n = 0; n < n_clusters; ++n) {
    const Vec3& centre = cfg_.uav_positions[static_cast<std::size_t>(n)];
    auto& cluster = ue_positions_[static_cast<std::size_t>(n)];
    cluster.reserve(static_cast<std::size_t>(n_ues));
    for (int m = 0; m < n_ues; ++m) {
      const double radius = cfg_.cluster_radius_m * std::sqrt(rng_.uniform01());
      const double angle = 2.0 * std::numbers::pi * rng_.uniform01();
      cluster.push_back(
          {centre.x + radius * std::cos(angle), centre.y + radius * std::sin(angle), 0.0});
    }
  }

  realization_.aa.clear();
  realization_.aa.reserve(static_cast<std::size_t>(n_clusters));
  for (int n = 0; n < n_clusters; ++n)
    realization_.aa.push_back(
        aa_channel(cfg_.uav_positions[static_cast<std::size_t>(n)], cfg_.irs_position, cfg_.chan));
  redraw_ag_channels();

  phases_ = PhaseShifts::identity(cfg_.net.irs_elements);
  steps_taken_ = 0;
  episode_active_ = true;
  return state_features(realization_, phases_);
}

StepResult Environment::step(const CentralAction& raw_action) {
  if (!episode_active_)
    throw std::logic_error("Environment::step: reset() required before stepping");
  if (raw_action.size() != action_dim())
    throw std::invalid_argument("Environment::step: action dimension mismatch");

  const PowerAllocation powers = map_powers(raw_action, cfg_.net);
  phases_ = map_phases(raw_action, cfg_.net);

  StepResult result;
  result.metrics = compute_metrics(cfg_.net, realization_, powers, phases_);
  result.reward = result.metrics.ee_norm;

  redraw_ag_channels();
  ++steps_taken_;
  result.done = steps_taken_ >= cfg_.episode_length;
  if (result.done) episode_active_ = false;
  result.next_state = state_features(realization_, phases_);
  return result;
}

Eigen::VectorXd Environment::observe_state() const {
  if (realization_.aa.empty())
    throw std::logic_error("Environment::observe_state: reset() required");
  return state_features(realization_, phases_);
}

PowerAllocation Environment::map_powers(const CentralAction& raw, const NetworkConfig& net) {
  PowerAllocation powers;
  powers.p.reserve(static_cast<std::size_t>(net.clusters));
  for (int n = 0; n < net.clusters; ++n) {
    const double r = std::clamp(raw[n], -1.0, 1.0);
    powers.p.push_back((r + 1.0) / 2.0 * net.p_max_w);
  }
  return powers;
}

PhaseShifts Environment::map_phases(const CentralAction& raw, const NetworkConfig& net) {
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(net.irs_elements));
  for (int k = 0; k < net.irs_elements; ++k) {
    const double r = std::clamp(raw[net.clusters + k], -1.0, 1.0);
    theta.push_back((r + 1.0) * std::numbers::pi);
  }
  return PhaseShifts(std::move(theta));
}

void Environment::redraw_ag_channels() {
  const int n_clusters = cfg_.net.clusters;
  const int n_ues = cfg_.net.ues_per_cluster;
  realization_.ag.assign(static_cast<std::size_t>(n_clusters), {});
  for (int n = 0; n < n_clusters; ++n) {
    auto& row = realization_.ag[static_cast<std::size_t>(n)];
    row.reserve(static_cast<std::size_t>(n_ues));
    for (int m = 0; m < n_ues; ++m)
      row.push_back(ag_channel(cfg_.irs_position,
                               ue_positions_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)],
                               cfg_.chan, rng_));
  }
}

}  // namespace irsuav

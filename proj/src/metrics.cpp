#include "irsuav/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace irsuav {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PhaseShifts::PhaseShifts(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& t : theta_) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
  }
}

ComplexVector PhaseShifts::unit_coefficients() const {
  ComplexVector phi(theta_.size());
  for (std::size_t k = 0; k < theta_.size(); ++k)
    phi[k] = {std::cos(theta_[k]), std::sin(theta_[k])};
  return phi;
}

PhaseShifts PhaseShifts::identity(int elements) {
  return PhaseShifts(std::vector<double>(static_cast<std::size_t>(elements), 0.0));
}

void NetworkConfig::validate() const {
  if (clusters < 1 || ues_per_cluster < 1 || irs_elements < 1)
    throw std::invalid_argument("NetworkConfig: counts must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("NetworkConfig: bandwidth must be > 0");
  if (!(p_max_w > 0.0)) throw std::invalid_argument("NetworkConfig: p_max must be > 0");
  if (!(p_fixed_w > 0.0)) throw std::invalid_argument("NetworkConfig: p_fixed must be > 0");
  if (!(noise_w > 0.0)) throw std::invalid_argument("NetworkConfig: noise power must be > 0");
}

ComplexScalar effective_channel(const ComplexVector& h_uav_irs, const PhaseShifts& phases,
                                const ComplexVector& h_irs_ue) {
  const std::size_t k = h_uav_irs.size();
  if (phases.size() != k || h_irs_ue.size() != k)
    throw std::invalid_argument("effective_channel: length mismatch");
  const std::vector<double>& theta = phases.theta();
  ComplexScalar sum{0.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    const ComplexScalar phi{std::cos(theta[i]), std::sin(theta[i])};
    sum += h_uav_irs[i] * phi * h_irs_ue[i];
  }
  return sum;
}

double sinr(const NetworkConfig& cfg, const ChannelRealization& real,
            const PowerAllocation& powers, const PhaseShifts& phases, int cluster, int ue) {
  if (cluster < 0 || cluster >= cfg.clusters || ue < 0 || ue >= cfg.ues_per_cluster)
    throw std::out_of_range("sinr: cluster/ue index out of range");
  const auto n = static_cast<std::size_t>(cluster);
  const auto m = static_cast<std::size_t>(ue);
  const ComplexVector& victim = real.ag[n][m];
  double signal = 0.0;
  double interference = 0.0;
  for (int i = 0; i < cfg.clusters; ++i) {
    const ComplexScalar g = effective_channel(real.aa[static_cast<std::size_t>(i)], phases, victim);
    const double term = powers.p[static_cast<std::size_t>(i)] * std::norm(g);
    if (i == cluster)
      signal = term;
    else
      interference += term;
  }
  return signal / (interference + cfg.noise_w);
}

double rate(const NetworkConfig& cfg, double sinr_value) {
  if (sinr_value < 0.0) throw std::invalid_argument("rate: negative sinr");
  return cfg.bandwidth_hz * std::log2(1.0 + sinr_value);
}

double total_rate(const NetworkConfig& cfg, const ChannelRealization& real,
                  const PowerAllocation& powers, const PhaseShifts& phases) {
  double sum = 0.0;
  for (int n = 0; n < cfg.clusters; ++n)
    for (int m = 0; m < cfg.ues_per_cluster; ++m)
      sum += rate(cfg, sinr(cfg, real, powers, phases, n, m));
  return sum;
}

double total_power(const NetworkConfig& cfg, const PowerAllocation& powers) {
  double sum = 0.0;
  for (double p : powers.p) sum += p;
  return sum + cfg.p_fixed_w;
}

double energy_efficiency(const NetworkConfig& cfg, const ChannelRealization& real,
                         const PowerAllocation& powers, const PhaseShifts& phases) {
  const double power = total_power(cfg, powers);
  if (power == 0.0) throw std::invalid_argument("energy_efficiency: zero total power");
  return total_rate(cfg, real, powers, phases) / power;
}

MetricsReport compute_metrics(const NetworkConfig& cfg, const ChannelRealization& real,
                              const PowerAllocation& powers, const PhaseShifts& phases) {
  MetricsReport report;
  const std::size_t pairs =
      static_cast<std::size_t>(cfg.clusters) * static_cast<std::size_t>(cfg.ues_per_cluster);
  report.sinr.reserve(pairs);
  report.rate.reserve(pairs);
  for (int n = 0; n < cfg.clusters; ++n) {
    for (int m = 0; m < cfg.ues_per_cluster; ++m) {
      const double s = sinr(cfg, real, powers, phases, n, m);
      const double r = rate(cfg, s);
      report.sinr.push_back(s);
      report.rate.push_back(r);
      report.total_rate += r;
    }
  }
  report.total_power = total_power(cfg, powers);
  report.ee = report.total_rate / report.total_power;
  report.ee_norm = report.ee / cfg.bandwidth_hz;
  return report;
}

std::string metrics_csv_header(const NetworkConfig& cfg) {
  std::ostringstream out;
  for (int n = 0; n < cfg.clusters; ++n)
    for (int m = 0; m < cfg.ues_per_cluster; ++m) out << "sinr_" << n << '_' << m << ',';
  for (int n = 0; n < cfg.clusters; ++n)
    for (int m = 0; m < cfg.ues_per_cluster; ++m) out << "rate_" << n << '_' << m << ',';
  out << "total_rate,total_power,ee,ee_norm";
  return out.str();
}

std::string metrics_csv_row(const MetricsReport& report) {
  std::ostringstream out;
  out.precision(17);
  for (double s : report.sinr) out << s << ',';
  for (double r : report.rate) out << r << ',';
  out << report.total_rate << ',' << report.total_power << ',' << report.ee << ','
      << report.ee_norm;
  return out.str();
}

}  // namespace irsuav

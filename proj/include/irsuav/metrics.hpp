#pragma once

#include <string>
#include <vector>

#include "irsuav/channel.hpp"

namespace irsuav {

// N transmit powers in watts; valid allocations satisfy 0 <= p_n <= p_max.
struct PowerAllocation {
  std::vector<double> p;
};

// K reflection phase shifts in radians, stored reduced into [0, 2*pi).
class PhaseShifts {
 public:
  PhaseShifts() = default;
  explicit PhaseShifts(std::vector<double> theta);

  const std::vector<double>& theta() const { return theta_; }
  std::size_t size() const { return theta_.size(); }

  // Diagonal of the reflection matrix: e^{j*theta_k}.
  ComplexVector unit_coefficients() const;

  static PhaseShifts identity(int elements);  // all theta_k = 0

 private:
  std::vector<double> theta_;
};

struct NetworkConfig {
  int clusters = 3;          // N: UAVs, one per UE cluster
  int ues_per_cluster = 10;  // M
  int irs_elements = 20;     // K
  double bandwidth_hz = 1e6;
  double p_max_w = 5.0;
  double p_fixed_w = 4.0;  // IRS power plus UAV circuit power
  double noise_w = 3.9810717055349694e-17;  // -134 dBm

  void validate() const;  // throws std::invalid_argument
};

// Per-step metrics. sinr/rate are cluster-major, UE-minor; the totals are the
// left-to-right sums of the per-UE entries in that same order, so they match
// the per-entry fields bit for bit.
struct MetricsReport {
  std::vector<double> sinr;
  std::vector<double> rate;     // bits/s
  double total_rate = 0.0;      // bits/s
  double total_power = 0.0;     // watts
  double ee = 0.0;              // bits/s/W
  double ee_norm = 0.0;         // bits/Hz/J (ee over bandwidth)
};

// Weighted inner product sum_k H_k * e^{j*theta_k} * h_k (the diagonal
// reflection matrix collapses the matrix product). Lengths must match.
ComplexScalar effective_channel(const ComplexVector& h_uav_irs, const PhaseShifts& phases,
                                const ComplexVector& h_irs_ue);

double sinr(const NetworkConfig& cfg, const ChannelRealization& real,
            const PowerAllocation& powers, const PhaseShifts& phases, int cluster, int ue);
double rate(const NetworkConfig& cfg, double sinr_value);
double total_rate(const NetworkConfig& cfg, const ChannelRealization& real,
                  const PowerAllocation& powers, const PhaseShifts& phases);
double total_power(const NetworkConfig& cfg, const PowerAllocation& powers);
double energy_efficiency(const NetworkConfig& cfg, const ChannelRealization& real,
                         const PowerAllocation& powers, const PhaseShifts& phases);

MetricsReport compute_metrics(const NetworkConfig& cfg, const ChannelRealization& real,
                              const PowerAllocation& powers, const PhaseShifts& phases);

// CSV row per time step. Column order: sinr_0_0 .. sinr_{N-1}_{M-1},
// rate_0_0 .. rate_{N-1}_{M-1}, total_rate, total_power, ee, ee_norm.
std::string metrics_csv_header(const NetworkConfig& cfg);
std::string metrics_csv_row(const MetricsReport& report);

}  // namespace irsuav

#include "irsuav/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsuav {

void ChannelParams::validate() const {
  if (!(beta0 > 0.0)) throw std::invalid_argument("ChannelParams: beta0 must be > 0");
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
    throw std::invalid_argument("ChannelParams: path-loss exponents must be > 0");
  if (!(rician_factor >= 0.0))
    throw std::invalid_argument("ChannelParams: rician_factor must be >= 0");
  if (!(d_over_lambda > 0.0))
    throw std::invalid_argument("ChannelParams: d_over_lambda must be > 0");
  if (elements < 1) throw std::invalid_argument("ChannelParams: elements must be >= 1");
}

ComplexVector steering_vector(double cos_angle, int elements, double d_over_lambda) {
  if (std::abs(cos_angle) > 1.0)
    throw std::invalid_argument("steering_vector: |cos_angle| must be <= 1");
  if (elements < 1) throw std::invalid_argument("steering_vector: elements must be >= 1");
  ComplexVector v(static_cast<std::size_t>(elements));
  const double step = -2.0 * std::numbers::pi * d_over_lambda * cos_angle;
  for (int k = 0; k < elements; ++k) {
    const double phase = step * static_cast<double>(k);
    v[static_cast<std::size_t>(k)] = {std::cos(phase), std::sin(phase)};
  }
  return v;
}

ComplexVector aa_channel(const Vec3& uav, const Vec3& irs, const ChannelParams& p) {
  const double d = distance(uav, irs);
  if (d == 0.0) throw std::invalid_argument("aa_channel: zero UAV-IRS distance");
  const double gain = std::sqrt(p.beta0 * std::pow(d, -p.kappa1));
  ComplexVector v = steering_vector(aoa_cosine(uav, irs), p.elements, p.d_over_lambda);
  for (auto& e : v) e *= gain;
  return v;
}

ComplexVector ag_channel(const Vec3& irs, const Vec3& ue, const ChannelParams& p, RngStream& rng) {
  const double d = distance(irs, ue);
  if (d == 0.0) throw std::invalid_argument("ag_channel: zero IRS-UE distance");
  const double gain = std::sqrt(p.beta0 * std::pow(d, -p.kappa2));
  const double los_weight = std::sqrt(p.rician_factor / (1.0 + p.rician_factor));
  const double nlos_weight = std::sqrt(1.0 / (1.0 + p.rician_factor));
  ComplexVector v = steering_vector(aod_cosine(irs, ue), p.elements, p.d_over_lambda);
  for (auto& e : v) e = gain * (los_weight * e + nlos_weight * rng.cnormal());
  return v;
}

}  // namespace irsuav

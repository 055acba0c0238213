#pragma once

#include <complex>
#include <vector>

#include "irsuav/geometry.hpp"
#include "irsuav/rng.hpp"

namespace irsuav {

using ComplexScalar = std::complex<double>;
using ComplexVector = std::vector<ComplexScalar>;

struct ChannelParams {
  double beta0 = 1e-3;         // power gain at reference distance, linear
  double kappa1 = 2.0;         // path-loss exponent, UAV-IRS link
  double kappa2 = 2.2;         // path-loss exponent, IRS-UE link
  double rician_factor = 4.0;  // LoS-to-NLoS power ratio of the IRS-UE link
  double d_over_lambda = 0.5;  // element spacing over carrier wavelength
  int elements = 20;           // IRS element count K

  void validate() const;  // throws std::invalid_argument
};

// One time step's channel set: aa[n] is the UAV n -> IRS vector, ag[n][m] the
// IRS -> UE m (cluster n) vector. All vectors have length K.
struct ChannelRealization {
  std::vector<ComplexVector> aa;
  std::vector<std::vector<ComplexVector>> ag;
};

// Element k carries phase -2*pi*(d/lambda)*k*cos_angle; element 0 is 1+0j and
// every element has unit magnitude. Rejects |cos_angle| > 1.
ComplexVector steering_vector(double cos_angle, int elements, double d_over_lambda);

// Pure line-of-sight UAV -> IRS channel; deterministic in the geometry.
// Every element has magnitude sqrt(beta0 * d^-kappa1).
ComplexVector aa_channel(const Vec3& uav, const Vec3& irs, const ChannelParams& p);

// Rician IRS -> UE channel; the NLoS part draws K fresh CN(0,1) variates from
// `rng` in element order.
ComplexVector ag_channel(const Vec3& irs, const Vec3& ue, const ChannelParams& p, RngStream& rng);

}  // namespace irsuav

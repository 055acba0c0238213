#include "irsuav/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace irsuav {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double aoa_cosine(const Vec3& uav, const Vec3& irs) {
  const double d = distance(uav, irs);
  if (d == 0.0) throw std::invalid_argument("aoa_cosine: coincident nodes");
  return (uav.x - irs.x) / d;
}

double aod_cosine(const Vec3& irs, const Vec3& ue) {
  const double d = distance(irs, ue);
  if (d == 0.0) throw std::invalid_argument("aod_cosine: coincident nodes");
  return (ue.x - irs.x) / d;
}

}  // namespace irsuav

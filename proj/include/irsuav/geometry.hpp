#pragma once

namespace irsuav {

// 3D position in metres. Ground nodes have z = 0, aerial nodes z > 0.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// The IRS is modelled as a uniform linear array along the global x axis, so
// steering cosines are the x displacement of the far node over the link
// distance. Both throw std::invalid_argument when the two nodes coincide.
double aoa_cosine(const Vec3& uav, const Vec3& irs);
double aod_cosine(const Vec3& irs, const Vec3& ue);

}  // namespace irsuav

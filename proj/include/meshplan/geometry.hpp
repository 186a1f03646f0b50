#pragma once

#include <Eigen/Core>
#include <cmath>

namespace meshplan {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * kPi;
  double y = std::fmod(a + kPi, two_pi);
  if (y <= 0.0) y += two_pi;
  return y - kPi;
}

}  // namespace meshplan

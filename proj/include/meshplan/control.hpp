#pragma once

#include <algorithm>
#include <vector>

namespace meshplan {

/// One control input: linear acceleration (m/s^2) and steering angle (rad).
struct ControlInput {
  double accel = 0.0;
  double steer = 0.0;
};

/// Horizon-length control policy; also the GA chromosome.
using ControlSequence = std::vector<ControlInput>;

/// Box of valid controls. Samplers, crossover and mutation are all closed
/// under these bounds.
struct ControlSpace {
  double accel_min = -3.0;
  double accel_max = 3.0;
  double steer_min = -0.785;
  double steer_max = 0.785;

  bool contains(const ControlInput& u) const {
    return u.accel >= accel_min && u.accel <= accel_max && u.steer >= steer_min &&
           u.steer <= steer_max;
  }

  ControlInput clamp(const ControlInput& u) const {
    return {std::clamp(u.accel, accel_min, accel_max), std::clamp(u.steer, steer_min, steer_max)};
  }

  double accel_range() const { return accel_max - accel_min; }
  double steer_range() const { return steer_max - steer_min; }
};

}  // namespace meshplan

#pragma once

#include <optional>

#include "meshplan/control.hpp"
#include "meshplan/geometry.hpp"
#include "meshplan/mesh.hpp"
#include "meshplan/voxel_grid.hpp"

namespace meshplan {

/// How gravity enters the velocity update: along the negative face normal
/// (the default), or as the in-plane component of the global gravity vector.
enum class GravityModel { surface_normal, tangential };

struct VehicleParams {
  double wheelbase = 0.5;      // m
  double friction_mu = 0.1;
  double gravity = 9.81;       // m/s^2
  double dt = 0.1;             // s
  double accel_min = -3.0;     // m/s^2
  double accel_max = 3.0;
  double steer_min = -0.785;   // rad
  double steer_max = 0.785;
  double rest_speed_epsilon = 1e-6;  // m/s; below this the vehicle counts as at rest
  GravityModel gravity_model = GravityModel::surface_normal;

  ControlSpace control_space() const {
    return ControlSpace{accel_min, accel_max, steer_min, steer_max};
  }
};

struct VehicleState {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;    // (-pi, pi]
  double pitch = 0.0;
  double roll = 0.0;
  Vec3 velocity = Vec3::Zero();
};

/// v minus its component along n; the in-plane part of the velocity.
Vec3 tangential_velocity(const Vec3& v, const Vec3& n);

/// Oriented point-to-plane distance (n . p + d) / |n|.
double signed_distance(const Vec3& point, const Face& face);

/// Drops the point onto the face plane along the normal. Idempotent.
Vec3 project_onto_face(const Vec3& point, const Face& face);

/// Unit travel direction. Along the tangential velocity when moving; at rest
/// it falls back to the yaw heading projected into the face plane, and to an
/// in-plane axis if the heading is parallel to the normal. Never zero.
Vec3 forward_direction(const VehicleState& state, const Face& face,
                       const VehicleParams& params);

/// Velocity update: v + (a*fwd - mu*g*fwd + gravity_term) * dt. Friction is
/// suppressed when the vehicle is at rest with zero commanded acceleration,
/// so a parked vehicle does not creep backward.
Vec3 update_velocity(const VehicleState& state, double accel, const Face& face,
                     const VehicleParams& params);

struct Orientation {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

/// Yaw integrates the bicycle steering rate |v_tangent|/L * tan(steer);
/// pitch and roll are read off the face normal.
Orientation update_orientation(const VehicleState& state, double steer, const Face& face,
                               const VehicleParams& params);

struct StepResult {
  VehicleState state;
  int face_id = -1;  // face the position was projected onto
};

/// One explicit-Euler step of the surface-constrained vehicle: advance along
/// the tangential velocity, look up the destination face for the tentative
/// position, project onto its plane, then update velocity (departure-face
/// normal) and orientation (destination-face normal).
///
/// Returns nullopt when the current or tentative position leaves index
/// coverage; rollouts treat that as terminal.
std::optional<StepResult> step(const VehicleState& state, const ControlInput& control,
                               const VoxelGrid& grid, const TriangleMesh& mesh,
                               const VehicleParams& params);

}  // namespace meshplan

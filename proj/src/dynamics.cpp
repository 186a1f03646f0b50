#include "meshplan/dynamics.hpp"

#include <cmath>

namespace meshplan {
namespace {

Vec3 gravity_acceleration(const Vec3& normal, const VehicleParams& p) {
  if (p.gravity_model == GravityModel::tangential) {
    const Vec3 g(0.0, 0.0, -p.gravity);
    return g - g.dot(normal) * normal;
  }
  return -p.gravity * normal;
}

}  // namespace

Vec3 tangential_velocity(const Vec3& v, const Vec3& n) { return v - v.dot(n) * n; }

double signed_distance(const Vec3& point, const Face& face) {
  return (face.normal.dot(point) + face.plane_offset) / face.normal.norm();
}

Vec3 project_onto_face(const Vec3& point, const Face& face) {
  return point - signed_distance(point, face) * face.normal;
}

Vec3 forward_direction(const VehicleState& state, const Face& face,
                       const VehicleParams& params) {
  const Vec3 v_tan = tangential_velocity(state.velocity, face.normal);
  const double speed = v_tan.norm();
  if (speed >= params.rest_speed_epsilon) return v_tan / speed;

  // At rest: head where the vehicle points.
  const Vec3 heading(std::cos(state.yaw), std::sin(state.yaw), 0.0);
  Vec3 t = tangential_velocity(heading, face.normal);
  double len = t.norm();
  if (len > 1e-12) return t / len;

  // Heading parallel to the normal; fall back to an in-plane axis.
  t = tangential_velocity(Vec3::UnitX(), face.normal);
  len = t.norm();
  if (len > 1e-12) return t / len;
  t = tangential_velocity(Vec3::UnitY(), face.normal);
  return t / t.norm();
}

Vec3 update_velocity(const VehicleState& state, double accel, const Face& face,
                     const VehicleParams& params) {
  const bool at_rest =
      tangential_velocity(state.velocity, face.normal).norm() < params.rest_speed_epsilon;

  const Vec3 fwd = forward_direction(state, face, params);
  Vec3 a_total = accel * fwd;
  if (!(at_rest && accel == 0.0)) {
    a_total -= params.friction_mu * params.gravity * fwd;
  }
  a_total += gravity_acceleration(face.normal, params);
  return state.velocity + a_total * params.dt;
}

Orientation update_orientation(const VehicleState& state, double steer, const Face& face,
                               const VehicleParams& params) {
  const double speed = tangential_velocity(state.velocity, face.normal).norm();
  Orientation o;
  o.yaw = wrap_angle(state.yaw + speed / params.wheelbase * std::tan(steer) * params.dt);
  o.pitch = std::atan2(face.normal.z(),
                       std::hypot(face.normal.x(), face.normal.y()));
  o.roll = std::atan2(face.normal.y(), face.normal.z());
  return o;
}

std::optional<StepResult> step(const VehicleState& state, const ControlInput& control,
                               const VoxelGrid& grid, const TriangleMesh& mesh,
                               const VehicleParams& params) {
  const auto departure = grid.try_nearest_face(mesh, state.position);
  if (!departure) return std::nullopt;

  const Vec3 v_tan = tangential_velocity(state.velocity, departure->normal);
  const Vec3 tentative = state.position + v_tan * params.dt;

  const auto destination = grid.try_nearest_face(mesh, tentative);
  if (!destination) return std::nullopt;

  StepResult out;
  out.face_id = destination->id;
  out.state.position = project_onto_face(tentative, *destination);
  out.state.velocity = update_velocity(state, control.accel, *departure, params);
  const Orientation o = update_orientation(state, control.steer, *destination, params);
  out.state.yaw = o.yaw;
  out.state.pitch = o.pitch;
  out.state.roll = o.roll;
  return out;
}

}  // namespace meshplan

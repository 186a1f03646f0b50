#include "meshplan/cost.hpp"

#include <algorithm>
#include <cmath>

namespace meshplan {

double distance_cost(const Vec3& p_next, const Vec3& p_target) {
  return (p_next - p_target).norm();
}

double slope_penalty(const Vec3& n_t, const Vec3& path_vec) {
  return std::abs(n_t.dot(path_vec));
}

double orthogonality_penalty(const Vec3& n_t, const Vec3& n_t1) {
  // |dot| of two unit vectors can exceed 1 by an ulp; clamp keeps the
  // penalty inside [0, 1].
  return 1.0 - std::min(1.0, std::abs(n_t.dot(n_t1)));
}

double traversability_cost(const Vec3& n_t, const Vec3& n_t1, const Vec3& p_next,
                           const Vec3& p_target) {
  return 0.5 * (slope_penalty(n_t, p_next - p_target) + orthogonality_penalty(n_t, n_t1));
}

CostBreakdown transition_cost(const VehicleState& /*from*/, const VehicleState& to,
                              const Vec3& target, const Face& departure, const Face& arrival,
                              const CostWeights& weights) {
  CostBreakdown c;
  c.distance_term = distance_cost(to.position, target);
  c.slope = slope_penalty(departure.normal, to.position - target);
  c.orthogonality = orthogonality_penalty(departure.normal, arrival.normal);
  c.traversability_term = 0.5 * (c.slope + c.orthogonality);
  c.total = weights.alpha1 * c.distance_term + weights.alpha2 * c.traversability_term;
  return c;
}

RolloutResult rollout(const VehicleState& initial, const ControlSequence& controls,
                      const Vec3& target, const World& world, const CostWeights& weights,
                      const VehicleParams& params) {
  RolloutResult r;

  auto face = world.grid.try_nearest_face(world.mesh, initial.position);
  if (!face) {
    r.cost = weights.off_mesh_penalty;
    r.left_mesh = true;
    return r;
  }

  VehicleState state = initial;
  for (const ControlInput& u : controls) {
    const auto stepped = step(state, u, world.grid, world.mesh, params);
    if (!stepped) {
      r.cost += weights.off_mesh_penalty;
      r.left_mesh = true;
      break;
    }
    // Arrival normal comes from the face at the projected position, which is
    // also the departure face of the next transition.
    const auto arrival = world.grid.try_nearest_face(world.mesh, stepped->state.position);
    if (!arrival) {
      r.cost += weights.off_mesh_penalty;
      r.left_mesh = true;
      break;
    }
    r.cost += transition_cost(state, stepped->state, target, *face, *arrival, weights).total;
    state = stepped->state;
    face = arrival;
    ++r.steps_completed;
  }
  return r;
}

}  // namespace meshplan

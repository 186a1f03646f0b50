#include "meshplan/planner.hpp"

#include <cmath>

#include "meshplan/errors.hpp"

namespace meshplan {

VehicleState initial_state(const Vec3& start, const Vec3& goal, const World& world) {
  const Face face = world.grid.nearest_face(world.mesh, start);

  VehicleState s;
  s.position = project_onto_face(start, face);
  const Vec3 to_goal = goal - s.position;
  s.yaw = (to_goal.x() == 0.0 && to_goal.y() == 0.0) ? 0.0
                                                     : std::atan2(to_goal.y(), to_goal.x());
  s.pitch = std::atan2(face.normal.z(), std::hypot(face.normal.x(), face.normal.y()));
  s.roll = std::atan2(face.normal.y(), face.normal.z());
  s.velocity = Vec3::Zero();
  return s;
}

Trajectory plan_with(HorizonPlanner& planner, const Vec3& start, const Vec3& goal,
                     const PlanContext& ctx, const PlanLoopConfig& loop) {
  const World& world = *ctx.world;
  if (!world.grid.contains(start)) throw OutOfBoundsError("start position outside coverage");
  if (!world.grid.contains(goal)) throw OutOfBoundsError("goal position outside coverage");

  Trajectory traj;
  traj.goal = goal;

  VehicleState state = initial_state(start, goal, world);
  traj.states.push_back(state);

  planner.reset();

  bool reached = (state.position - goal).norm() < loop.goal_tolerance;
  for (int k = 0; !reached && k < loop.max_steps; ++k) {
    const ControlSequence seq =
        planner.decide(state, goal, ctx, static_cast<std::uint64_t>(k));
    const ControlInput u = seq.front();

    const auto stepped = step(state, u, world.grid, world.mesh, ctx.params);
    if (!stepped) break;  // left the indexed terrain

    const auto departure = world.grid.try_nearest_face(world.mesh, state.position);
    const auto arrival = world.grid.try_nearest_face(world.mesh, stepped->state.position);
    if (!departure || !arrival) break;
    traj.per_step_costs.push_back(
        transition_cost(state, stepped->state, goal, *departure, *arrival, ctx.weights));
    traj.applied_controls.push_back(u);

    state = stepped->state;
    traj.states.push_back(state);
    reached = (state.position - goal).norm() < loop.goal_tolerance;
  }

  traj.reached_goal = reached;
  return traj;
}

bool replay_matches(const Trajectory& traj, const PlanContext& ctx) {
  if (traj.states.size() != traj.applied_controls.size() + 1) return false;
  VehicleState state = traj.states.front();
  for (std::size_t k = 0; k < traj.applied_controls.size(); ++k) {
    const auto stepped =
        step(state, traj.applied_controls[k], ctx.world->grid, ctx.world->mesh, ctx.params);
    if (!stepped) return false;
    state = stepped->state;
    const VehicleState& rec = traj.states[k + 1];
    const bool same = (state.position.array() == rec.position.array()).all() &&
                      (state.velocity.array() == rec.velocity.array()).all() &&
                      state.yaw == rec.yaw && state.pitch == rec.pitch &&
                      state.roll == rec.roll;
    if (!same) return false;
  }
  return true;
}

}  // namespace meshplan

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "meshplan/control.hpp"
#include "meshplan/cost.hpp"
#include "meshplan/dynamics.hpp"
#include "meshplan/world.hpp"

namespace meshplan {

/// Everything a receding-horizon optimizer needs to evaluate candidates.
struct PlanContext {
  const World* world = nullptr;
  CostWeights weights;
  VehicleParams params;
};

struct Trajectory {
  std::vector<VehicleState> states;        // applied_controls.size() + 1 entries
  ControlSequence applied_controls;
  std::vector<CostBreakdown> per_step_costs;
  bool reached_goal = false;
  Vec3 goal = Vec3::Zero();
};

/// One receding-horizon decision maker (GAKD, MPPI, log-MPPI). decide() may
/// keep warm-start state between calls; reset() clears it before a new plan.
class HorizonPlanner {
 public:
  virtual ~HorizonPlanner() = default;
  virtual std::string_view name() const = 0;
  virtual int horizon() const = 0;
  virtual std::uint64_t rollouts_per_decision() const = 0;
  virtual void reset() {}
  virtual ControlSequence decide(const VehicleState& state, const Vec3& goal,
                                 const PlanContext& ctx, std::uint64_t step_index) = 0;
};

struct PlanLoopConfig {
  int max_steps = 1000;
  double goal_tolerance = 0.1;  // m
};

/// Initial pose for a plan: start projected onto its nearest face, yaw facing
/// the goal, pitch/roll from the face normal, zero velocity.
VehicleState initial_state(const Vec3& start, const Vec3& goal, const World& world);

/// The receding-horizon loop shared by every planner: optimize, apply only
/// the first control, append the state, repeat until the position is within
/// goal_tolerance of the goal or max_steps is exhausted. Stepping off the
/// indexed terrain ends the plan with reached_goal = false.
///
/// Throws OutOfBoundsError when start or goal lies outside index coverage.
Trajectory plan_with(HorizonPlanner& planner, const Vec3& start, const Vec3& goal,
                     const PlanContext& ctx, const PlanLoopConfig& loop);

/// Re-simulates recorded controls from the recorded initial state; true when
/// every recorded state is reproduced exactly.
bool replay_matches(const Trajectory& traj, const PlanContext& ctx);

}  // namespace meshplan

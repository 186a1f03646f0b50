#pragma once

#include "meshplan/control.hpp"
#include "meshplan/dynamics.hpp"
#include "meshplan/geometry.hpp"
#include "meshplan/world.hpp"

namespace meshplan {

struct CostWeights {
  double alpha1 = 1.0;            // distance term
  double alpha2 = 1.0;            // traversability term
  double off_mesh_penalty = 1e6;  // added when a rollout leaves index coverage
};

struct CostBreakdown {
  double total = 0.0;
  double distance_term = 0.0;        // distance to target
  double traversability_term = 0.0;  // (slope + orthogonality) / 2
  double slope = 0.0;
  double orthogonality = 0.0;
};

/// Euclidean distance from the next position to the target.
double distance_cost(const Vec3& p_next, const Vec3& p_target);

/// |n_t . j| where j = p_next - p_target (unnormalized).
double slope_penalty(const Vec3& n_t, const Vec3& path_vec);

/// 1 - |n_t . n_t1|; 0 for parallel normals, 1 for orthogonal ones.
double orthogonality_penalty(const Vec3& n_t, const Vec3& n_t1);

/// Traversability of one transition: (slope + orthogonality) / 2.
double traversability_cost(const Vec3& n_t, const Vec3& n_t1, const Vec3& p_next,
                           const Vec3& p_target);

/// Full per-transition cost: alpha1 * distance + alpha2 * traversability,
/// with n_t the departure face normal and n_t1 the arrival face normal.
CostBreakdown transition_cost(const VehicleState& from, const VehicleState& to,
                              const Vec3& target, const Face& departure, const Face& arrival,
                              const CostWeights& weights);

struct RolloutResult {
  double cost = 0.0;
  bool left_mesh = false;
  int steps_completed = 0;
};

/// Simulates the control sequence from the initial state and accumulates
/// transition costs. Leaving index coverage truncates the rollout and adds
/// off_mesh_penalty, so every sequence still gets a finite, comparable cost.
RolloutResult rollout(const VehicleState& initial, const ControlSequence& controls,
                      const Vec3& target, const World& world, const CostWeights& weights,
                      const VehicleParams& params);

inline double rollout_cost(const VehicleState& initial, const ControlSequence& controls,
                           const Vec3& target, const World& world, const CostWeights& weights,
                           const VehicleParams& params) {
  return rollout(initial, controls, target, world, weights, params).cost;
}

}  // namespace meshplan

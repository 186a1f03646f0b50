#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meshplan/control.hpp"
#include "meshplan/planner.hpp"
#include "meshplan/rng.hpp"

namespace meshplan::ga {

/// Direction of the early-stop test on the best fitness of a generation.
/// `below` bails out of hopeless populations (fitness under the threshold);
/// `above` stops as soon as the best fitness clears the threshold.
enum class FitnessStopMode { below, above };

struct GaConfig {
  int population_size = 30;
  int generations = 50;
  int horizon = 10;
  double mutation_rate = 0.2;    // per-gene probability
  double mutation_scale = 0.25;  // perturbation half-range as a fraction of each bound range
  int tournament_size = 3;
  double fitness_stop_threshold = 1e-8;
  FitnessStopMode fitness_stop_mode = FitnessStopMode::below;
  std::uint64_t seed = 0;
  int max_steps = 1000;
  double goal_tolerance = 0.1;  // m
};

/// N uniformly sampled control sequences of the given horizon, every gene
/// inside the control space.
std::vector<ControlSequence> sample_population(const ControlSpace& space, int n, int horizon,
                                               Rng& rng);

/// Fitness of a rollout cost: 1 / (1 + cost), in (0, 1].
inline double fitness_from_cost(double cost) { return 1.0 / (1.0 + cost); }

/// Rollout the sequence and map its cost to a fitness.
double fitness(const ControlSequence& seq, const VehicleState& state, const Vec3& target,
               const PlanContext& ctx);

/// Draws tournament_size distinct indices uniformly and returns the one with
/// the highest fitness; ties go to the lowest index.
int tournament_select(const std::vector<double>& fitnesses, int tournament_size, Rng& rng);

/// One-point crossover at t_c in [0, H]: the first child takes parent A
/// before t_c and parent B from t_c on; the second child is the mirror.
std::pair<ControlSequence, ControlSequence> crossover(const ControlSequence& a,
                                                      const ControlSequence& b, int t_c);

/// Uniform crossover point in [1, H-1] (1 when H == 1).
int pick_crossover_point(int horizon, Rng& rng);

/// Perturbs each gene with probability mutation_rate by a uniform step of up
/// to mutation_scale times the bound range per component, clamped so every
/// output stays inside the control space.
ControlSequence mutate(const ControlSequence& seq, const ControlSpace& space,
                       double mutation_rate, double mutation_scale, Rng& rng);

/// Runs the genetic optimization for one receding-horizon decision and
/// returns the best sequence encountered across all generations. The initial
/// population is seeded with the all-zero sequence when the space allows it,
/// so the result is never worse than coasting. Deterministic for a given rng
/// state; mating events draw from substreams keyed on (generation, index).
ControlSequence optimize(const VehicleState& state, const Vec3& target, const PlanContext& ctx,
                         const GaConfig& config, Rng& rng);

class GaPlanner final : public HorizonPlanner {
 public:
  explicit GaPlanner(const GaConfig& config) : config_(config) {}

  std::string_view name() const override { return "gakd"; }
  int horizon() const override { return config_.horizon; }
  std::uint64_t rollouts_per_decision() const override {
    return static_cast<std::uint64_t>(config_.population_size) *
           static_cast<std::uint64_t>(config_.generations);
  }
  ControlSequence decide(const VehicleState& state, const Vec3& goal, const PlanContext& ctx,
                         std::uint64_t step_index) override;

  const GaConfig& config() const { return config_; }

 private:
  GaConfig config_;
};

/// Full planning run: receding-horizon loop around optimize().
Trajectory plan(const Vec3& start, const Vec3& goal, const World& world, const GaConfig& config,
                const VehicleParams& params, const CostWeights& weights);

}  // namespace meshplan::ga

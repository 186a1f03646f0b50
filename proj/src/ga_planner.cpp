#include "meshplan/ga_planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace meshplan::ga {

std::vector<ControlSequence> sample_population(const ControlSpace& space, int n, int horizon,
                                               Rng& rng) {
  std::vector<ControlSequence> pop(static_cast<std::size_t>(n));
  for (auto& seq : pop) {
    seq.resize(static_cast<std::size_t>(horizon));
    for (auto& gene : seq) {
      gene.accel = rng.uniform(space.accel_min, space.accel_max);
      gene.steer = rng.uniform(space.steer_min, space.steer_max);
    }
  }
  return pop;
}

double fitness(const ControlSequence& seq, const VehicleState& state, const Vec3& target,
               const PlanContext& ctx) {
  return fitness_from_cost(
      rollout_cost(state, seq, target, *ctx.world, ctx.weights, ctx.params));
}

int tournament_select(const std::vector<double>& fitnesses, int tournament_size, Rng& rng) {
  const int n = static_cast<int>(fitnesses.size());
  if (n == 0) throw std::invalid_argument("empty population");
  tournament_size = std::min(std::max(tournament_size, 1), n);

  int best = -1;
  std::vector<int> drawn;
  drawn.reserve(static_cast<std::size_t>(tournament_size));
  while (static_cast<int>(drawn.size()) < tournament_size) {
    const int cand = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    bool dup = false;
    for (int d : drawn) dup = dup || (d == cand);
    if (dup) continue;
    drawn.push_back(cand);
    if (best < 0 || fitnesses[cand] > fitnesses[best] ||
        (fitnesses[cand] == fitnesses[best] && cand < best)) {
      best = cand;
    }
  }
  return best;
}

std::pair<ControlSequence, ControlSequence> crossover(const ControlSequence& a,
                                                      const ControlSequence& b, int t_c) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover parents differ in length");
  const int h = static_cast<int>(a.size());
  if (t_c < 0 || t_c > h) throw std::invalid_argument("crossover point out of range");

  ControlSequence c1(a.size());
  ControlSequence c2(a.size());
  for (int t = 0; t < h; ++t) {
    c1[t] = t < t_c ? a[t] : b[t];
    c2[t] = t < t_c ? b[t] : a[t];
  }
  return {std::move(c1), std::move(c2)};
}

int pick_crossover_point(int horizon, Rng& rng) {
  if (horizon < 2) return 1;
  return rng.uniform_int(1, horizon - 1);
}

ControlSequence mutate(const ControlSequence& seq, const ControlSpace& space,
                       double mutation_rate, double mutation_scale, Rng& rng) {
  ControlSequence out = seq;
  const double accel_step = mutation_scale * space.accel_range();
  const double steer_step = mutation_scale * space.steer_range();
  for (auto& gene : out) {
    if (rng.uniform() >= mutation_rate) continue;
    gene.accel += rng.uniform(-accel_step, accel_step);
    gene.steer += rng.uniform(-steer_step, steer_step);
    gene = space.clamp(gene);
  }
  return out;
}

ControlSequence optimize(const VehicleState& state, const Vec3& target, const PlanContext& ctx,
                         const GaConfig& config, Rng& rng) {
  const ControlSpace space = ctx.params.control_space();
  const int n = config.population_size;

  std::vector<ControlSequence> population =
      sample_population(space, n, config.horizon, rng);
  if (space.contains(ControlInput{0.0, 0.0})) {
    population[0].assign(static_cast<std::size_t>(config.horizon), ControlInput{0.0, 0.0});
  }

  const std::uint64_t root = rng.next_u64();  // keys the mating substreams

  ControlSequence best_seq = population[0];
  double best_cost = std::numeric_limits<double>::infinity();

  std::vector<double> costs(static_cast<std::size_t>(n));
  std::vector<double> fits(static_cast<std::size_t>(n));

  for (int g = 0; g < config.generations; ++g) {
    for (int i = 0; i < n; ++i) {
      costs[i] = rollout_cost(state, population[i], target, *ctx.world, ctx.weights, ctx.params);
      fits[i] = fitness_from_cost(costs[i]);
    }

    int gen_best = 0;
    for (int i = 1; i < n; ++i) {
      if (costs[i] < costs[gen_best]) gen_best = i;
    }
    if (costs[gen_best] < best_cost) {
      best_cost = costs[gen_best];
      best_seq = population[gen_best];
    }

    const double best_fit = fits[gen_best];
    if (config.fitness_stop_mode == FitnessStopMode::below
            ? best_fit < config.fitness_stop_threshold
            : best_fit > config.fitness_stop_threshold) {
      break;
    }
    if (g + 1 == config.generations) break;

    // Next generation: the best-so-far individual survives unchanged, the
    // rest are offspring.
    std::vector<ControlSequence> next;
    next.reserve(static_cast<std::size_t>(n));
    next.push_back(best_seq);
    for (std::uint64_t mating = 0; static_cast<int>(next.size()) < n; ++mating) {
      Rng mate_rng(derive_seed(root, {static_cast<std::uint64_t>(g), mating}));
      const int pa = tournament_select(fits, config.tournament_size, mate_rng);
      const int pb = tournament_select(fits, config.tournament_size, mate_rng);
      const int t_c = pick_crossover_point(config.horizon, mate_rng);
      auto [c1, c2] = crossover(population[pa], population[pb], t_c);
      next.push_back(mutate(c1, space, config.mutation_rate, config.mutation_scale, mate_rng));
      if (static_cast<int>(next.size()) < n) {
        next.push_back(mutate(c2, space, config.mutation_rate, config.mutation_scale, mate_rng));
      }
    }
    population = std::move(next);
  }

  return best_seq;
}

ControlSequence GaPlanner::decide(const VehicleState& state, const Vec3& goal,
                                  const PlanContext& ctx, std::uint64_t step_index) {
  Rng rng(derive_seed(config_.seed, {0x67616b64ull, step_index}));
  return optimize(state, goal, ctx, config_, rng);
}

Trajectory plan(const Vec3& start, const Vec3& goal, const World& world, const GaConfig& config,
                const VehicleParams& params, const CostWeights& weights) {
  PlanContext ctx{&world, weights, params};
  GaPlanner planner(config);
  return plan_with(planner, start, goal, ctx, PlanLoopConfig{config.max_steps, config.goal_tolerance});
}

}  // namespace meshplan::ga

#include "meshplan/mppi.hpp"

#include <cmath>

namespace meshplan::mppi {

double sample_perturbation(Rng& rng, double sigma, double log_sigma, Variant variant) {
  const double base = rng.normal(0.0, sigma);
  if (variant == Variant::gaussian) return base;
  const double mu = -0.5 * log_sigma * log_sigma;
  return base * std::exp(rng.normal(mu, log_sigma));
}

std::vector<double> softmax_weights(const std::vector<double>& costs, double lambda) {
  std::vector<double> w(costs.size());
  double lowest = costs[0];
  for (double c : costs) lowest = std::min(lowest, c);
  double sum = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    w[i] = std::exp(-(costs[i] - lowest) / lambda);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

ControlSequence optimize(const VehicleState& state, const Vec3& target,
                         const ControlSequence& nominal, const PlanContext& ctx,
                         const MppiConfig& config, Rng& rng) {
  const ControlSpace space = ctx.params.control_space();
  const int k = config.samples;
  const int h = static_cast<int>(nominal.size());

  const std::uint64_t root = rng.next_u64();

  std::vector<ControlSequence> candidates(static_cast<std::size_t>(k));
  std::vector<double> costs(static_cast<std::size_t>(k));
  bool any_on_mesh = false;

  for (int i = 0; i < k; ++i) {
    Rng sample_rng(derive_seed(root, {static_cast<std::uint64_t>(i)}));
    ControlSequence cand(nominal);
    for (int t = 0; t < h; ++t) {
      cand[t].accel +=
          sample_perturbation(sample_rng, config.sigma_accel, config.log_sigma, config.variant);
      cand[t].steer +=
          sample_perturbation(sample_rng, config.sigma_steer, config.log_sigma, config.variant);
      cand[t] = space.clamp(cand[t]);
    }
    const RolloutResult r = rollout(state, cand, target, *ctx.world, ctx.weights, ctx.params);
    costs[i] = r.cost;
    any_on_mesh = any_on_mesh || !r.left_mesh;
    candidates[i] = std::move(cand);
  }

  if (!any_on_mesh) return nominal;

  const std::vector<double> weights = softmax_weights(costs, config.lambda);

  ControlSequence out(static_cast<std::size_t>(h));
  for (int t = 0; t < h; ++t) {
    double accel = 0.0;
    double steer = 0.0;
    for (int i = 0; i < k; ++i) {
      accel += weights[i] * candidates[i][t].accel;
      steer += weights[i] * candidates[i][t].steer;
    }
    out[t] = space.clamp(ControlInput{accel, steer});
  }
  return out;
}

ControlSequence MppiPlanner::decide(const VehicleState& state, const Vec3& goal,
                                    const PlanContext& ctx, std::uint64_t step_index) {
  const ControlSpace space = ctx.params.control_space();
  if (static_cast<int>(nominal_.size()) != config_.horizon) {
    nominal_.assign(static_cast<std::size_t>(config_.horizon),
                    space.clamp(ControlInput{0.0, 0.0}));
  }

  Rng rng(derive_seed(config_.seed, {0x6d707069ull, step_index}));
  const ControlSequence seq = optimize(state, goal, nominal_, ctx, config_, rng);

  // Warm start for the next decision: drop the applied control, repeat the last.
  nominal_.assign(seq.begin() + 1, seq.end());
  nominal_.push_back(seq.back());

  return seq;
}

Trajectory plan(const Vec3& start, const Vec3& goal, const World& world,
                const MppiConfig& config, const VehicleParams& params,
                const CostWeights& weights) {
  PlanContext ctx{&world, weights, params};
  MppiPlanner planner(config);
  return plan_with(planner, start, goal, ctx,
                   PlanLoopConfig{config.max_steps, config.goal_tolerance});
}

}  // namespace meshplan::mppi

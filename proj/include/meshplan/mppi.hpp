#pragma once

#include <cstdint>
#include <vector>

#include "meshplan/control.hpp"
#include "meshplan/planner.hpp"
#include "meshplan/rng.hpp"

namespace meshplan::mppi {

/// Perturbation distribution: plain Gaussian, or the heavier-tailed
/// normal-log-normal product used by the log variant.
enum class Variant { gaussian, log_normal_mixture };

struct MppiConfig {
  int samples = 30;        // K; defaults to the GA population size for budget parity
  int horizon = 10;
  double lambda = 1.0;     // temperature
  double sigma_accel = 1.0;   // m/s^2
  double sigma_steer = 0.25;  // rad
  double log_sigma = 0.5;  // std-dev of the log-space factor (log variant only)
  Variant variant = Variant::gaussian;
  std::uint64_t seed = 0;
  int max_steps = 1000;
  double goal_tolerance = 0.1;  // m
};

/// One perturbation draw. The gaussian variant returns sigma * z. The
/// log-normal mixture returns sigma * z * exp(w) with w normal in log space,
/// mean-compensated (mu = -log_sigma^2 / 2) so the expected multiplier is 1
/// and the perturbation scale still tracks sigma; log_sigma = 0 reduces it to
/// the gaussian draw exactly.
double sample_perturbation(Rng& rng, double sigma, double log_sigma, Variant variant);

/// Softmax weights over rollout costs: w_i proportional to
/// exp(-(cost_i - min_j cost_j) / lambda), normalized to sum to 1.
std::vector<double> softmax_weights(const std::vector<double>& costs, double lambda);

/// One information-theoretic MPPI update: samples K perturbed sequences
/// around the nominal, clamps them to the control space, rolls each out and
/// returns the cost-weighted average (clamped). When every sample leaves the
/// indexed terrain the nominal is returned unchanged. Deterministic for a
/// given rng state; each sample draws from its own substream.
ControlSequence optimize(const VehicleState& state, const Vec3& target,
                         const ControlSequence& nominal, const PlanContext& ctx,
                         const MppiConfig& config, Rng& rng);

class MppiPlanner final : public HorizonPlanner {
 public:
  explicit MppiPlanner(const MppiConfig& config) : config_(config) {}

  std::string_view name() const override {
    return config_.variant == Variant::gaussian ? "mppi" : "log-mppi";
  }
  int horizon() const override { return config_.horizon; }
  std::uint64_t rollouts_per_decision() const override {
    return static_cast<std::uint64_t>(config_.samples);
  }
  void reset() override { nominal_.clear(); }
  ControlSequence decide(const VehicleState& state, const Vec3& goal, const PlanContext& ctx,
                         std::uint64_t step_index) override;

  const MppiConfig& config() const { return config_; }

 private:
  ControlSequence nominal_;  // warm start: shift left, repeat last
  MppiConfig config_;
};

/// Full planning run with the given variant.
Trajectory plan(const Vec3& start, const Vec3& goal, const World& world,
                const MppiConfig& config, const VehicleParams& params,
                const CostWeights& weights);

}  // namespace meshplan::mppi

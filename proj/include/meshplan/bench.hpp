#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meshplan/ga_planner.hpp"
#include "meshplan/mppi.hpp"
#include "meshplan/planner.hpp"
#include "meshplan/world.hpp"

namespace meshplan::bench {

struct Scenario {
  std::string id;
  Vec3 start = Vec3::Zero();
  Vec3 goal = Vec3::Zero();

  double straight_line_distance() const { return (goal - start).norm(); }
};

/// Scenario file: JSON array of {id, start: [x,y,z], goal: [x,y,z]}.
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);
void save_scenarios(const std::vector<Scenario>& scenarios, const std::filesystem::path& path);

/// Mean per-transition traversability, recomputed from the stored states and
/// the trajectory goal (planner internals are never consulted). Throws
/// MetricError for trajectories with no transitions.
double pi_metric(const Trajectory& traj, const World& world);

/// Path length minus the straight-line distance between the endpoints.
double delta_metric(const Trajectory& traj);

/// Per-scenario trade-off values for one planner: w times the min-max
/// normalized pi values plus (1 - w) times the normalized delta values.
/// A zero-range dimension contributes 0. Needs at least two scenarios.
std::vector<double> psi_metric(const std::vector<double>& pi_values,
                               const std::vector<double>& delta_values, double w);

struct TrialRecord {
  std::string scenario_id;
  std::string planner;
  int horizon = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  bool reached_goal = false;
  double pi = 0.0;
  double delta = 0.0;
  double computation_time_s = 0.0;
  Trajectory trajectory;
};

struct CellAverage {
  std::string scenario_id;
  std::string planner;
  int horizon = 0;
  int trials = 0;
  int ok_trials = 0;
  int reached = 0;
  double mean_pi = 0.0;
  double mean_delta = 0.0;
  double mean_time = 0.0;
};

struct TradeoffEntry {
  std::string planner;
  int horizon = 0;
  std::string scenario_id;
  double psi = 0.0;
};

struct HorizonPoint {
  std::string planner;
  int horizon = 0;
  double mean_pi = 0.0;  // mean of per-scenario means
};

struct BenchmarkReport {
  std::vector<TrialRecord> trials;
  std::vector<CellAverage> averages;
  std::vector<TradeoffEntry> tradeoff;
  double tradeoff_w = 0.5;
  std::vector<HorizonPoint> horizon_series;
  std::vector<int> horizons;
  std::map<std::string, std::uint64_t> rollouts_per_decision;
  nlohmann::json config_snapshot;
};

/// Everything shared across planners in a benchmark: dynamics, cost weights,
/// and the per-planner optimizer settings (horizon and seed are overridden
/// per cell).
struct PlannerConfigs {
  VehicleParams params;
  CostWeights weights;
  ga::GaConfig ga;
  mppi::MppiConfig mppi;
};

/// Planner factory; name is one of gakd, mppi, log-mppi.
std::unique_ptr<HorizonPlanner> make_planner(const std::string& name,
                                             const PlannerConfigs& configs, int horizon,
                                             std::uint64_t seed);

struct BenchOptions {
  std::vector<std::string> planners = {"gakd", "mppi", "log-mppi"};
  int trials = 5;
  int horizon = 10;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: hardware concurrency
  double tradeoff_w = 0.5;
};

/// Runs every (scenario x planner x trial) cell with a derived seed, records
/// per-trial metrics and wall-clock plan time, then aggregates per-cell
/// averages and the trade-off table. Cells may execute in parallel; results
/// are identical to sequential execution apart from the timing fields.
/// A failing cell is recorded with ok = false and the run continues.
BenchmarkReport run_scenarios(const World& world, const std::vector<Scenario>& scenarios,
                              const PlannerConfigs& configs, const BenchOptions& options);

/// run_scenarios once per horizon; merges the trials and adds the
/// per-horizon mean-traversability series for each planner.
BenchmarkReport horizon_sweep(const World& world, const std::vector<Scenario>& scenarios,
                              const PlannerConfigs& configs, const BenchOptions& options,
                              const std::vector<int>& horizons);

enum class ReportFormat { json, csv };

/// JSON mirrors the report structure (trajectories included); CSV holds one
/// row per trial. Numbers are written with 6 significant digits.
void emit_report(const BenchmarkReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Reads back an emitted JSON report (trajectories are not reloaded).
BenchmarkReport load_report(const std::filesystem::path& path);

/// Report JSON with every timing field zeroed; lets callers compare runs
/// byte-for-byte while ignoring wall-clock noise.
nlohmann::json report_to_json(const BenchmarkReport& report);
nlohmann::json strip_timing_fields(nlohmann::json j);

}  // namespace meshplan::bench

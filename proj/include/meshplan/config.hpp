#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "meshplan/bench.hpp"
#include "meshplan/voxel_grid.hpp"

namespace meshplan {

/// Fully resolved run configuration. Every field has a default; values from
/// a JSON config file override defaults; CLI flags override the file.
struct RunConfig {
  VehicleParams vehicle;
  CostWeights cost;
  ga::GaConfig ga;
  mppi::MppiConfig mppi;
  VoxelGridOptions voxel;
  int threads = 0;  // 0: hardware concurrency

  bench::PlannerConfigs planner_configs() const {
    return bench::PlannerConfigs{vehicle, cost, ga, mppi};
  }
};

/// CLI flags that override file and default values.
struct FlagOverrides {
  std::optional<int> horizon;          // sets both GA and MPPI horizons
  std::optional<std::uint64_t> seed;   // sets both GA and MPPI seeds
  std::optional<double> voxel_size;
  std::optional<double> voxel_padding;
  std::optional<int> threads;
};

/// Applies a config file section-by-section onto the defaults. Unknown keys
/// are ignored; wrongly typed values raise ParseError.
void apply_config_json(RunConfig& config, const nlohmann::json& j);

/// defaults -> file -> flags, in increasing precedence.
RunConfig resolve_config(const std::optional<nlohmann::json>& file, const FlagOverrides& flags);

/// Reads and parses the config file (ParseError / IoError on failure).
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Snapshot of the effective configuration, embedded into benchmark reports.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace meshplan

#include "meshplan/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "meshplan/errors.hpp"
#include "meshplan/rng.hpp"

namespace meshplan::bench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

double round_sig(double x, int digits = 6) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string fmt_sig(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

Vec3 vec3_from_json(const json& a) {
  if (!a.is_array() || a.size() != 3) throw ParseError("expected a 3-element array");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

// value() that tolerates null (NaN means serialize as null in JSON).
double num_or(const json& j, const char* key, double def) {
  if (!j.contains(key) || !j[key].is_number()) return def;
  return j[key].get<double>();
}

ordered_json vec3_to_json(const Vec3& v, bool rounded = true) {
  if (rounded) return ordered_json::array({round_sig(v.x()), round_sig(v.y()), round_sig(v.z())});
  return ordered_json::array({v.x(), v.y(), v.z()});
}

}  // namespace

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("scenario file '" + path.string() + "': " + e.what());
  }
  if (!j.is_array()) throw ParseError("scenario file must hold a JSON array");

  std::vector<Scenario> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    Scenario s;
    if (item.contains("id")) {
      s.id = item["id"].is_string() ? item["id"].get<std::string>()
                                    : item["id"].dump();
    } else {
      s.id = std::to_string(out.size() + 1);
    }
    s.start = vec3_from_json(item.at("start"));
    s.goal = vec3_from_json(item.at("goal"));
    out.push_back(std::move(s));
  }
  return out;
}

void save_scenarios(const std::vector<Scenario>& scenarios, const std::filesystem::path& path) {
  ordered_json j = ordered_json::array();
  for (const Scenario& s : scenarios) {
    j.push_back({{"id", s.id},
                 {"start", vec3_to_json(s.start, false)},
                 {"goal", vec3_to_json(s.goal, false)}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

double pi_metric(const Trajectory& traj, const World& world) {
  if (traj.states.size() < 2) {
    throw MetricError("traversability metric needs at least one transition");
  }
  const std::size_t transitions = traj.states.size() - 1;
  double sum = 0.0;
  for (std::size_t t = 0; t < transitions; ++t) {
    const Face from = world.grid.nearest_face(world.mesh, traj.states[t].position);
    const Face to = world.grid.nearest_face(world.mesh, traj.states[t + 1].position);
    sum += traversability_cost(from.normal, to.normal, traj.states[t + 1].position, traj.goal);
  }
  return sum / static_cast<double>(transitions);
}

double delta_metric(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  double length = 0.0;
  for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
    length += (traj.states[t + 1].position - traj.states[t].position).norm();
  }
  return length - (traj.states.back().position - traj.states.front().position).norm();
}

std::vector<double> psi_metric(const std::vector<double>& pi_values,
                               const std::vector<double>& delta_values, double w) {
  if (pi_values.size() != delta_values.size()) {
    throw MetricError("trade-off inputs differ in length");
  }
  if (pi_values.size() < 2) {
    throw MetricError("min-max normalization needs at least two scenarios");
  }

  const auto normalized = [](const std::vector<double>& v, std::size_t i) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double range = hi - lo;
    return range == 0.0 ? 0.0 : (v[i] - lo) / range;
  };

  std::vector<double> psi(pi_values.size());
  for (std::size_t i = 0; i < pi_values.size(); ++i) {
    psi[i] = w * normalized(pi_values, i) + (1.0 - w) * normalized(delta_values, i);
  }
  return psi;
}

std::unique_ptr<HorizonPlanner> make_planner(const std::string& name,
                                             const PlannerConfigs& configs, int horizon,
                                             std::uint64_t seed) {
  if (name == "gakd") {
    ga::GaConfig c = configs.ga;
    c.horizon = horizon;
    c.seed = seed;
    return std::make_unique<ga::GaPlanner>(c);
  }
  if (name == "mppi" || name == "log-mppi") {
    mppi::MppiConfig c = configs.mppi;
    c.horizon = horizon;
    c.seed = seed;
    c.variant = name == "mppi" ? mppi::Variant::gaussian : mppi::Variant::log_normal_mixture;
    return std::make_unique<mppi::MppiPlanner>(c);
  }
  throw UsageError("unknown planner '" + name + "' (expected gakd, mppi or log-mppi)");
}

namespace {

PlanLoopConfig loop_config_for(const std::string& name, const PlannerConfigs& configs) {
  if (name == "gakd") return {configs.ga.max_steps, configs.ga.goal_tolerance};
  return {configs.mppi.max_steps, configs.mppi.goal_tolerance};
}

void aggregate(BenchmarkReport& report, const std::vector<Scenario>& scenarios,
               const std::vector<std::string>& planners, const std::vector<int>& horizons,
               double tradeoff_w) {
  for (int horizon : horizons) {
    for (const std::string& planner : planners) {
      std::vector<double> cell_pi;
      std::vector<double> cell_delta;
      bool all_cells_valid = true;

      for (const Scenario& scenario : scenarios) {
        CellAverage avg;
        avg.scenario_id = scenario.id;
        avg.planner = planner;
        avg.horizon = horizon;
        double sum_pi = 0.0, sum_delta = 0.0, sum_time = 0.0;
        for (const TrialRecord& t : report.trials) {
          if (t.scenario_id != scenario.id || t.planner != planner || t.horizon != horizon) {
            continue;
          }
          ++avg.trials;
          if (!t.ok) continue;
          ++avg.ok_trials;
          if (t.reached_goal) ++avg.reached;
          sum_pi += t.pi;
          sum_delta += t.delta;
          sum_time += t.computation_time_s;
        }
        if (avg.ok_trials > 0) {
          avg.mean_pi = sum_pi / avg.ok_trials;
          avg.mean_delta = sum_delta / avg.ok_trials;
          avg.mean_time = sum_time / avg.ok_trials;
          cell_pi.push_back(avg.mean_pi);
          cell_delta.push_back(avg.mean_delta);
        } else {
          avg.mean_pi = avg.mean_delta = avg.mean_time = std::nan("");
          all_cells_valid = false;
        }
        report.averages.push_back(std::move(avg));
      }

      if (all_cells_valid && cell_pi.size() >= 2) {
        const std::vector<double> psi = psi_metric(cell_pi, cell_delta, tradeoff_w);
        for (std::size_t s = 0; s < scenarios.size(); ++s) {
          report.tradeoff.push_back(TradeoffEntry{planner, horizon, scenarios[s].id, psi[s]});
        }
      }

      if (!cell_pi.empty()) {
        double sum = 0.0;
        for (double x : cell_pi) sum += x;
        report.horizon_series.push_back(
            HorizonPoint{planner, horizon, sum / static_cast<double>(cell_pi.size())});
      }
    }
  }
}

}  // namespace

BenchmarkReport run_scenarios(const World& world, const std::vector<Scenario>& scenarios,
                              const PlannerConfigs& configs, const BenchOptions& options) {
  BenchmarkReport report;
  report.tradeoff_w = options.tradeoff_w;
  report.horizons = {options.horizon};

  for (const std::string& name : options.planners) {
    auto planner = make_planner(name, configs, options.horizon, 0);  // validates the name
    report.rollouts_per_decision[name] = planner->rollouts_per_decision();
  }

  const std::size_t cells =
      scenarios.size() * options.planners.size() * static_cast<std::size_t>(options.trials);
  report.trials.resize(cells);

  const auto run_cell = [&](std::size_t index) {
    const std::size_t per_scenario = options.planners.size() * options.trials;
    const std::size_t si = index / per_scenario;
    const std::size_t pi_ = (index % per_scenario) / options.trials;
    const std::size_t ti = index % static_cast<std::size_t>(options.trials);

    const Scenario& scenario = scenarios[si];
    const std::string& planner_name = options.planners[pi_];

    TrialRecord rec;
    rec.scenario_id = scenario.id;
    rec.planner = planner_name;
    rec.horizon = options.horizon;
    rec.trial = static_cast<int>(ti);
    rec.seed = derive_seed(options.master_seed,
                           {static_cast<std::uint64_t>(options.horizon), si, pi_, ti});
    try {
      const auto planner = make_planner(planner_name, configs, options.horizon, rec.seed);
      const PlanContext ctx{&world, configs.weights, configs.params};
      const PlanLoopConfig loop = loop_config_for(planner_name, configs);

      const auto t0 = std::chrono::steady_clock::now();
      rec.trajectory = plan_with(*planner, scenario.start, scenario.goal, ctx, loop);
      const auto t1 = std::chrono::steady_clock::now();
      rec.computation_time_s = std::chrono::duration<double>(t1 - t0).count();

      rec.reached_goal = rec.trajectory.reached_goal;
      rec.pi = pi_metric(rec.trajectory, world);
      rec.delta = delta_metric(rec.trajectory);
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    report.trials[index] = std::move(rec);
  };

  int workers = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(cells)));

  if (workers == 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells) return;
          run_cell(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  aggregate(report, scenarios, options.planners, report.horizons, options.tradeoff_w);
  return report;
}

BenchmarkReport horizon_sweep(const World& world, const std::vector<Scenario>& scenarios,
                              const PlannerConfigs& configs, const BenchOptions& options,
                              const std::vector<int>& horizons) {
  BenchmarkReport merged;
  merged.tradeoff_w = options.tradeoff_w;
  merged.horizons = horizons;

  for (int h : horizons) {
    BenchOptions per = options;
    per.horizon = h;
    BenchmarkReport r = run_scenarios(world, scenarios, configs, per);
    merged.rollouts_per_decision = r.rollouts_per_decision;
    for (auto& t : r.trials) merged.trials.push_back(std::move(t));
    for (auto& a : r.averages) merged.averages.push_back(std::move(a));
    for (auto& e : r.tradeoff) merged.tradeoff.push_back(std::move(e));
    for (auto& p : r.horizon_series) merged.horizon_series.push_back(std::move(p));
  }
  return merged;
}

namespace {

ordered_json trajectory_to_json(const Trajectory& traj) {
  ordered_json states = ordered_json::array();
  for (const VehicleState& s : traj.states) {
    states.push_back(ordered_json::array(
        {round_sig(s.position.x()), round_sig(s.position.y()), round_sig(s.position.z()),
         round_sig(s.yaw), round_sig(s.pitch), round_sig(s.roll), round_sig(s.velocity.x()),
         round_sig(s.velocity.y()), round_sig(s.velocity.z())}));
  }
  ordered_json controls = ordered_json::array();
  for (const ControlInput& u : traj.applied_controls) {
    controls.push_back(ordered_json::array({round_sig(u.accel), round_sig(u.steer)}));
  }
  ordered_json costs = ordered_json::array();
  for (const CostBreakdown& c : traj.per_step_costs) {
    costs.push_back(ordered_json::array({round_sig(c.total), round_sig(c.distance_term),
                                         round_sig(c.traversability_term), round_sig(c.slope),
                                         round_sig(c.orthogonality)}));
  }
  return ordered_json{{"goal", vec3_to_json(traj.goal)},
                      {"reached_goal", traj.reached_goal},
                      {"states", std::move(states)},
                      {"controls", std::move(controls)},
                      {"costs", std::move(costs)}};
}

}  // namespace

nlohmann::json report_to_json(const BenchmarkReport& report) {
  ordered_json j;
  j["kind"] = "benchmark";
  j["config"] = report.config_snapshot.is_null() ? json::object() : report.config_snapshot;
  j["horizons"] = report.horizons;
  j["tradeoff_w"] = report.tradeoff_w;
  j["rollouts_per_decision"] = report.rollouts_per_decision;

  ordered_json trials = ordered_json::array();
  for (const TrialRecord& t : report.trials) {
    ordered_json rec{{"scenario", t.scenario_id},
                     {"planner", t.planner},
                     {"horizon", t.horizon},
                     {"trial", t.trial},
                     {"seed", t.seed},
                     {"ok", t.ok},
                     {"error", t.error},
                     {"reached_goal", t.reached_goal},
                     {"steps", t.trajectory.applied_controls.size()},
                     {"pi_metric", round_sig(t.pi)},
                     {"delta_metric", round_sig(t.delta)},
                     {"computation_time_s", round_sig(t.computation_time_s)}};
    rec["trajectory"] = trajectory_to_json(t.trajectory);
    trials.push_back(std::move(rec));
  }
  j["trials"] = std::move(trials);

  ordered_json averages = ordered_json::array();
  for (const CellAverage& a : report.averages) {
    averages.push_back(ordered_json{{"scenario", a.scenario_id},
                                    {"planner", a.planner},
                                    {"horizon", a.horizon},
                                    {"trials", a.trials},
                                    {"ok_trials", a.ok_trials},
                                    {"reached", a.reached},
                                    {"mean_pi", round_sig(a.mean_pi)},
                                    {"mean_delta", round_sig(a.mean_delta)},
                                    {"mean_time", round_sig(a.mean_time)}});
  }
  j["averages"] = std::move(averages);

  ordered_json tradeoff = ordered_json::array();
  for (const TradeoffEntry& e : report.tradeoff) {
    tradeoff.push_back(ordered_json{{"planner", e.planner},
                                    {"horizon", e.horizon},
                                    {"scenario", e.scenario_id},
                                    {"psi", round_sig(e.psi)}});
  }
  j["tradeoff"] = std::move(tradeoff);

  ordered_json series = ordered_json::array();
  for (const HorizonPoint& p : report.horizon_series) {
    series.push_back(ordered_json{
        {"planner", p.planner}, {"horizon", p.horizon}, {"mean_pi", round_sig(p.mean_pi)}});
  }
  j["horizon_series"] = std::move(series);
  return j;
}

void emit_report(const BenchmarkReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");

  if (format == ReportFormat::json) {
    out << report_to_json(report).dump(1) << "\n";
  } else {
    out << "scenario,planner,horizon,trial,seed,ok,reached_goal,steps,pi_metric,delta_metric,"
           "computation_time_s\n";
    for (const TrialRecord& t : report.trials) {
      out << t.scenario_id << ',' << t.planner << ',' << t.horizon << ',' << t.trial << ','
          << t.seed << ',' << (t.ok ? 1 : 0) << ',' << (t.reached_goal ? 1 : 0) << ','
          << t.trajectory.applied_controls.size() << ',' << fmt_sig(t.pi) << ','
          << fmt_sig(t.delta) << ',' << fmt_sig(t.computation_time_s) << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

BenchmarkReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("report '" + path.string() + "': " + e.what());
  }

  BenchmarkReport r;
  r.tradeoff_w = j.value("tradeoff_w", 0.5);
  r.horizons = j.value("horizons", std::vector<int>{});
  r.config_snapshot = j.value("config", json::object());
  if (j.contains("rollouts_per_decision")) {
    for (auto& [k, v] : j["rollouts_per_decision"].items()) {
      r.rollouts_per_decision[k] = v.get<std::uint64_t>();
    }
  }
  for (const auto& t : j.value("trials", json::array())) {
    TrialRecord rec;
    rec.scenario_id = t.value("scenario", "");
    rec.planner = t.value("planner", "");
    rec.horizon = t.value("horizon", 0);
    rec.trial = t.value("trial", 0);
    rec.seed = t.value("seed", 0ull);
    rec.ok = t.value("ok", false);
    rec.error = t.value("error", "");
    rec.reached_goal = t.value("reached_goal", false);
    rec.pi = num_or(t, "pi_metric", 0.0);
    rec.delta = num_or(t, "delta_metric", 0.0);
    rec.computation_time_s = num_or(t, "computation_time_s", 0.0);
    r.trials.push_back(std::move(rec));
  }
  for (const auto& a : j.value("averages", json::array())) {
    CellAverage avg;
    avg.scenario_id = a.value("scenario", "");
    avg.planner = a.value("planner", "");
    avg.horizon = a.value("horizon", 0);
    avg.trials = a.value("trials", 0);
    avg.ok_trials = a.value("ok_trials", 0);
    avg.reached = a.value("reached", 0);
    avg.mean_pi = num_or(a, "mean_pi", std::nan(""));
    avg.mean_delta = num_or(a, "mean_delta", std::nan(""));
    avg.mean_time = num_or(a, "mean_time", std::nan(""));
    r.averages.push_back(std::move(avg));
  }
  for (const auto& e : j.value("tradeoff", json::array())) {
    r.tradeoff.push_back(TradeoffEntry{e.value("planner", ""), e.value("horizon", 0),
                                       e.value("scenario", ""), e.value("psi", 0.0)});
  }
  for (const auto& p : j.value("horizon_series", json::array())) {
    r.horizon_series.push_back(
        HorizonPoint{p.value("planner", ""), p.value("horizon", 0), p.value("mean_pi", 0.0)});
  }
  return r;
}

nlohmann::json strip_timing_fields(nlohmann::json j) {
  if (j.is_object()) {
    j.erase("computation_time_s");
    j.erase("mean_time");
    for (auto& [key, value] : j.items()) value = strip_timing_fields(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timing_fields(value);
  }
  return j;
}

}  // namespace meshplan::bench

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scs/mission.hpp"

// Experiment front end behind the CLI: run one scheme, sweep a scenario
// parameter over a value list, or render persisted result files as SVG.
// Exit codes: 0 success, 1 error, 2 completed but degraded.
namespace scs::harness {

struct RunOptions {
  std::string scenario_path;  // empty: built-in defaults
  std::string scheme = "scs";
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;  // override for the scheduling weight
  bool log_solver = false;
};

struct SweepOptions {
  std::string scenario_path;
  std::string param;           // see parameter_names()
  std::vector<double> values;
  std::vector<std::string> schemes = {"scs"};
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 0;  // 0: hardware concurrency
};

struct PlotOptions {
  std::string in_dir;
  std::string out_dir;  // empty: next to the inputs
};

int cmd_run(const RunOptions& opts);
int cmd_sweep(const SweepOptions& opts);
int cmd_plot(const PlotOptions& opts);

// Sweepable scenario parameters.
std::vector<std::string> parameter_names();
// Throws ValidationError on unknown names or values breaking invariants.
void set_parameter(Scenario& s, const std::string& name, double value);

// Persist mission_result.json, rates.csv, trajectory.csv, gains.csv,
// assignment.csv (and solver_log.csv when captured) under dir.
void write_mission_files(const std::string& dir, const mission::MissionResult& r,
                         const Scenario& s);

}  // namespace scs::harness

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scs/beam_sc.hpp"
#include "scs/beam_scs.hpp"
#include "scs/schedule.hpp"
#include "scs/trajectory.hpp"

namespace scs::mission {

enum class Scheme { scs, fhf, fhf_bf, single };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws on unknown names

struct BcdTraceEntry {
  int outer = 0;     // 0 is the initial configuration
  double asr = 0.0;  // clamped, over all slots
  int reverts = 0;   // block updates rolled back for not improving
};

struct SensingReport {
  int slot = 0;
  int target = 0;
  double gain = 0.0;
  double threshold = 0.0;
  bool feasible = true;
};

struct SolverLogRow {
  int slot = 0;
  conic::IterRecord rec;
};

struct FeasibilityReport {
  bool alice_path_ok = true;
  bool jack_path_ok = true;
  bool budgets_ok = true;
  double min_separation = 0.0;
  bool separation_ok = true;
  std::vector<std::string> violations;
};

struct MissionResult {
  Scheme scheme = Scheme::scs;
  std::uint64_t rng_seed = 0;
  traj::Trajectory alice, jack;  // jack stays empty for single-UAV missions
  bool has_jack = true;
  std::vector<SlotBeams> beams;  // beams[n-1] belongs to slot n
  std::vector<Phase> phases;
  std::vector<double> rates;     // clamped per-slot secrecy rates
  double asr_sc = 0.0;           // NaN when the phase has no slots
  double asr_scs = 0.0;
  double asr_overall = 0.0;
  std::vector<SensingReport> gains;
  sched::SlotAssignment assignment;
  std::vector<BcdTraceEntry> trace;
  FeasibilityReport feasibility;
  bool degraded = false;
  std::vector<std::string> notes;
  std::vector<SolverLogRow> solver_log;
  double wall_seconds = 0.0;
  long conic_solves = 0;
};

struct BcdResult {
  traj::Trajectory alice, jack;
  std::vector<SlotBeams> beams;
  std::vector<BcdTraceEntry> trace;
  std::vector<SolverLogRow> solver_log;
  long conic_solves = 0;
  bool degraded = false;
  std::vector<std::string> notes;
};

// Channels from the two UAV positions toward Bob and Eve.
beam::ScChannels slot_channels(const Scenario& s, const Vec2& u_alice,
                               const Vec2& u_jack, bool has_jack);

// Clamped per-slot secrecy rates for stored trajectories/beams/phases.
std::vector<double> clamped_rates(const Scenario& s,
                                  const traj::Trajectory& alice,
                                  const traj::Trajectory& jack,
                                  std::span<const SlotBeams> beams,
                                  std::span<const Phase> phases);

// Alternating beam/trajectory maximization over the full horizon. Each block
// update is kept only when the mission rate does not drop, so the trace is
// nondecreasing.
BcdResult run_bcd(const Scenario& s);

// Full pipeline: run_bcd, pick sensing slots by weighted distance, re-solve
// the selected slots with the gain floor, assemble the report.
MissionResult run_two_phase(const Scenario& s);

// scheme = scs routes to run_two_phase; the others reproduce the comparison
// schemes (fixed fly-hover-fly paths, with or without optimized beams, and
// the single-UAV variant).
MissionResult run_scheme(Scheme scheme, const Scenario& s);

std::string mission_to_json(const MissionResult& r, const Scenario& s);

}  // namespace scs::mission

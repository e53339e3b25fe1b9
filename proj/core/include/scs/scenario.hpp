#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scs/types.hpp"

namespace scs {

// Knobs of the iterative solvers. Everything a loop can tune lives here so
// experiments can sweep them through the scenario document.
struct SolverConfig {
  double trust_radius_init = 5.0;  // m, trajectory trust region at loop entry
  double shrink_alice = 0.9;       // trust-region shrink factor, in (0,1)
  double shrink_jack = 0.9;
  double bcd_tol = 1e-3;    // bits/s/Hz, outer loop stop
  double beam_tol = 1e-3;   // bits/s/Hz, per-slot beam refinement stop
  double alice_tol = 1e-3;  // bits/s/Hz, trajectory refinement stop
  double jack_tol = 1e-3;
  double penalty_init = 1.0;     // rank-one penalty control factor
  double penalty_shrink = 0.5;   // geometric penalty schedule
  double rank_one_tol = 0.99;    // lambda_max / trace acceptance ratio
  double kkt_tol = 1e-6;         // interior-point duality/KKT target
  double trust_floor = 1e-3;     // m, trajectory loop stops below this radius
  int max_bcd_iters = 12;
  int max_sca_iters = 25;
  int max_tr_iters = 40;
  int max_penalty_rounds = 10;
  int max_newton_iters = 400;
  bool check_gradients = false;  // finite-difference gate on trajectory linearizations
  bool log_solver = false;       // keep per-iteration solver logs
};

// Full mission description in SI/linear units. Field values loaded from a
// JSON document are converted from their annotated dB/dBm forms on load.
struct Scenario {
  Vec2 alice_start{0.0, 0.0};
  Vec2 alice_end{100.0, 0.0};
  Vec2 jack_start{0.0, 0.0};
  Vec2 jack_end{100.0, 0.0};
  double alt_alice = 120.0;  // m
  double alt_jack = 100.0;   // m
  Vec2 bob_pos{40.0, 60.0};
  Vec2 eve_pos{60.0, 60.0};
  std::vector<Vec2> targets;  // ground targets, m

  int num_antennas = 4;
  double spacing_ratio = 0.5;  // antenna spacing over wavelength

  double p_max_alice = 1.0;                  // W (30 dBm)
  double p_max_jack = 0.31622776601683794;   // W (25 dBm)
  double noise_bob = 1e-11;                  // W (-80 dBm)
  double noise_eve = 1e-11;                  // W
  double pathloss_ref = 1e-3;                // linear power gain at 1 m (-30 dB)
  double resid_jam_bob = 0.01;               // -20 dB
  double resid_jam_eve = 1.0;                // 0 dB
  double resid_sense_bob = 0.01;
  double resid_sense_eve = 1.0;

  double horizon = 10.0;   // s
  double slot_len = 0.5;   // s
  double v_max = 20.0;     // m/s
  double d_min = 20.0;     // m, inter-UAV separation
  double gamma_sense = 1e-5;  // W (-20 dBm), beampattern-gain threshold
  int slots_per_target = 2;
  double tau_weight = 0.5;  // sensing-vs-communication distance weight

  SolverConfig solver;
  std::uint64_t rng_seed = 0;
};

// Derived timing grid.
struct MissionGrid {
  int num_slots;      // N = horizon / slot_len
  int sensing_slots;  // N_s = slots_per_target * |targets|
  int comm_slots;     // N_c; the sensing slots are picked out of the full horizon
  double max_step;    // D_max = v_max * slot_len, m
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

// count targets evenly placed strictly between a and b (the default,
// illustrative placement used when a document does not list positions).
std::vector<Vec2> spread_targets(const Vec2& a, const Vec2& b, int count);

// Built-in example mission (case 1): both UAVs fly (0,0) -> (100,0), Bob at
// (40,60), Eve at (60,60), four targets spread along the transit line.
Scenario default_scenario();

// Parse a JSON document; unspecified fields keep their defaults. Throws
// ValidationError (with the field name) or std::runtime_error on parse
// failure. The result is always validated.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// Round-trippable document in native (linear/SI) units.
std::string scenario_to_json(const Scenario& s);

// Throws ValidationError naming the violated field.
void validate(const Scenario& s);

MissionGrid mission_grid(const Scenario& s);

}  // namespace scs

#include "scs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace scs {

using nlohmann::json;

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<Vec2> spread_targets(const Vec2& a, const Vec2& b, int count) {
  std::vector<Vec2> t;
  t.reserve(count);
  for (int k = 1; k <= count; ++k) {
    t.push_back(a + (b - a) * (double(k) / double(count + 1)));
  }
  return t;
}

Scenario default_scenario() {
  Scenario s;
  s.targets = spread_targets(s.alice_start, s.alice_end, 4);
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ValidationError(field, msg);
}

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) fail(field, msg);
}

double num_at(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) fail(key, "expected a number");
  return j.at(key).get<double>();
}

Vec2 vec2_at(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(key, "expected [x, y]");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

// Reads a quantity that may be given in a converted unit (first key) or
// directly (second key). Exactly one of them may be present.
struct UnitField {
  const char* converted_key;
  const char* direct_key;
  double (*convert)(double);
  double* dest;
};

void apply_unit_fields(const json& j, const std::vector<UnitField>& fields,
                       std::set<std::string>& seen) {
  for (const auto& f : fields) {
    const bool has_conv = j.contains(f.converted_key);
    const bool has_direct = j.contains(f.direct_key);
    if (has_conv && has_direct) {
      fail(f.converted_key, std::string("conflicts with '") + f.direct_key + "'");
    }
    if (has_conv) {
      *f.dest = f.convert(num_at(j, f.converted_key));
      seen.insert(f.converted_key);
    } else if (has_direct) {
      *f.dest = num_at(j, f.direct_key);
      seen.insert(f.direct_key);
    }
  }
}

void load_solver(const json& j, SolverConfig& cfg) {
  static const std::set<std::string> known = {
      "trust_radius_init_m", "shrink_alice", "shrink_jack", "bcd_tol",
      "beam_tol", "alice_tol", "jack_tol", "penalty_init", "penalty_shrink",
      "rank_one_tol", "kkt_tol", "trust_floor_m", "max_bcd_iters",
      "max_sca_iters", "max_tr_iters", "max_penalty_rounds",
      "max_newton_iters", "check_gradients", "log_solver"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail("solver." + key, "unknown field");
    (void)value;
  }
  auto get = [&](const char* k, double& dest) {
    if (j.contains(k)) dest = num_at(j, k);
  };
  auto geti = [&](const char* k, int& dest) {
    if (j.contains(k)) dest = static_cast<int>(std::llround(num_at(j, k)));
  };
  get("trust_radius_init_m", cfg.trust_radius_init);
  get("shrink_alice", cfg.shrink_alice);
  get("shrink_jack", cfg.shrink_jack);
  get("bcd_tol", cfg.bcd_tol);
  get("beam_tol", cfg.beam_tol);
  get("alice_tol", cfg.alice_tol);
  get("jack_tol", cfg.jack_tol);
  get("penalty_init", cfg.penalty_init);
  get("penalty_shrink", cfg.penalty_shrink);
  get("rank_one_tol", cfg.rank_one_tol);
  get("kkt_tol", cfg.kkt_tol);
  get("trust_floor_m", cfg.trust_floor);
  geti("max_bcd_iters", cfg.max_bcd_iters);
  geti("max_sca_iters", cfg.max_sca_iters);
  geti("max_tr_iters", cfg.max_tr_iters);
  geti("max_penalty_rounds", cfg.max_penalty_rounds);
  geti("max_newton_iters", cfg.max_newton_iters);
  if (j.contains("check_gradients")) cfg.check_gradients = j.at("check_gradients").get<bool>();
  if (j.contains("log_solver")) cfg.log_solver = j.at("log_solver").get<bool>();
}

int grid_slots(const Scenario& s) {
  const double ratio = s.horizon / s.slot_len;
  const long long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - double(n)) > 1e-9 * std::max(1.0, ratio)) {
    fail("horizon_s", "horizon must be a positive integer multiple of slot_len");
  }
  return static_cast<int>(n);
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scenario parse failure: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("scenario document must be a JSON object");

  Scenario s = default_scenario();
  std::set<std::string> seen;

  const std::vector<std::pair<const char*, Vec2*>> points = {
      {"alice_start_m", &s.alice_start}, {"alice_end_m", &s.alice_end},
      {"jack_start_m", &s.jack_start},   {"jack_end_m", &s.jack_end},
      {"bob_pos_m", &s.bob_pos},         {"eve_pos_m", &s.eve_pos},
  };
  for (const auto& [key, dest] : points) {
    if (j.contains(key)) {
      *dest = vec2_at(j, key);
      seen.insert(key);
    }
  }

  if (j.contains("targets_m") && j.contains("num_targets")) {
    fail("targets_m", "conflicts with 'num_targets'");
  }
  if (j.contains("targets_m")) {
    const auto& arr = j.at("targets_m");
    if (!arr.is_array()) fail("targets_m", "expected an array of [x, y]");
    s.targets.clear();
    for (size_t i = 0; i < arr.size(); ++i) {
      const auto& v = arr[i];
      if (!v.is_array() || v.size() != 2) fail("targets_m", "expected [x, y] entries");
      s.targets.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    seen.insert("targets_m");
  } else if (j.contains("num_targets")) {
    const int k = static_cast<int>(std::llround(num_at(j, "num_targets")));
    require(k >= 0, "num_targets", "must be >= 0");
    s.targets = spread_targets(s.alice_start, s.alice_end, k);
    seen.insert("num_targets");
  }

  double noise_both = std::numeric_limits<double>::quiet_NaN();
  const std::vector<UnitField> unit_fields = {
      {"p_max_alice_dbm", "p_max_alice_w", dbm_to_watts, &s.p_max_alice},
      {"p_max_jack_dbm", "p_max_jack_w", dbm_to_watts, &s.p_max_jack},
      {"noise_dbm", "noise_w", dbm_to_watts, &noise_both},
      {"noise_bob_dbm", "noise_bob_w", dbm_to_watts, &s.noise_bob},
      {"noise_eve_dbm", "noise_eve_w", dbm_to_watts, &s.noise_eve},
      {"gamma_sense_dbm", "gamma_sense_w", dbm_to_watts, &s.gamma_sense},
      {"pathloss_ref_db", "pathloss_ref_lin", db_to_linear, &s.pathloss_ref},
      {"resid_jam_bob_db", "resid_jam_bob_lin", db_to_linear, &s.resid_jam_bob},
      {"resid_jam_eve_db", "resid_jam_eve_lin", db_to_linear, &s.resid_jam_eve},
      {"resid_sense_bob_db", "resid_sense_bob_lin", db_to_linear, &s.resid_sense_bob},
      {"resid_sense_eve_db", "resid_sense_eve_lin", db_to_linear, &s.resid_sense_eve},
  };
  apply_unit_fields(j, unit_fields, seen);
  if (!std::isnan(noise_both)) {
    if (seen.count("noise_bob_dbm") || seen.count("noise_bob_w") ||
        seen.count("noise_eve_dbm") || seen.count("noise_eve_w")) {
      fail("noise_dbm", "conflicts with per-node noise fields");
    }
    s.noise_bob = s.noise_eve = noise_both;
  }

  const std::vector<std::pair<const char*, double*>> plain = {
      {"alt_alice_m", &s.alt_alice}, {"alt_jack_m", &s.alt_jack},
      {"horizon_s", &s.horizon},     {"slot_len_s", &s.slot_len},
      {"v_max_mps", &s.v_max},       {"d_min_m", &s.d_min},
      {"spacing_ratio", &s.spacing_ratio}, {"tau_weight", &s.tau_weight},
  };
  for (const auto& [key, dest] : plain) {
    if (j.contains(key)) {
      *dest = num_at(j, key);
      seen.insert(key);
    }
  }

  if (j.contains("num_antennas")) {
    s.num_antennas = static_cast<int>(std::llround(num_at(j, "num_antennas")));
    seen.insert("num_antennas");
  }
  if (j.contains("slots_per_target")) {
    s.slots_per_target = static_cast<int>(std::llround(num_at(j, "slots_per_target")));
    seen.insert("slots_per_target");
  }
  if (j.contains("rng_seed")) {
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    seen.insert("rng_seed");
  }
  if (j.contains("solver")) {
    load_solver(j.at("solver"), s.solver);
    seen.insert("solver");
  }

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!seen.count(key)) fail(key, "unknown field");
  }

  validate(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  auto put2 = [&](const char* k, const Vec2& v) { j[k] = {v.x(), v.y()}; };
  put2("alice_start_m", s.alice_start);
  put2("alice_end_m", s.alice_end);
  put2("jack_start_m", s.jack_start);
  put2("jack_end_m", s.jack_end);
  put2("bob_pos_m", s.bob_pos);
  put2("eve_pos_m", s.eve_pos);
  j["targets_m"] = json::array();
  for (const auto& t : s.targets) j["targets_m"].push_back({t.x(), t.y()});
  j["alt_alice_m"] = s.alt_alice;
  j["alt_jack_m"] = s.alt_jack;
  j["num_antennas"] = s.num_antennas;
  j["spacing_ratio"] = s.spacing_ratio;
  j["p_max_alice_w"] = s.p_max_alice;
  j["p_max_jack_w"] = s.p_max_jack;
  j["noise_bob_w"] = s.noise_bob;
  j["noise_eve_w"] = s.noise_eve;
  j["pathloss_ref_lin"] = s.pathloss_ref;
  j["resid_jam_bob_lin"] = s.resid_jam_bob;
  j["resid_jam_eve_lin"] = s.resid_jam_eve;
  j["resid_sense_bob_lin"] = s.resid_sense_bob;
  j["resid_sense_eve_lin"] = s.resid_sense_eve;
  j["horizon_s"] = s.horizon;
  j["slot_len_s"] = s.slot_len;
  j["v_max_mps"] = s.v_max;
  j["d_min_m"] = s.d_min;
  j["gamma_sense_w"] = s.gamma_sense;
  j["slots_per_target"] = s.slots_per_target;
  j["tau_weight"] = s.tau_weight;
  j["rng_seed"] = s.rng_seed;
  j["solver"] = {
      {"trust_radius_init_m", s.solver.trust_radius_init},
      {"shrink_alice", s.solver.shrink_alice},
      {"shrink_jack", s.solver.shrink_jack},
      {"bcd_tol", s.solver.bcd_tol},
      {"beam_tol", s.solver.beam_tol},
      {"alice_tol", s.solver.alice_tol},
      {"jack_tol", s.solver.jack_tol},
      {"penalty_init", s.solver.penalty_init},
      {"penalty_shrink", s.solver.penalty_shrink},
      {"rank_one_tol", s.solver.rank_one_tol},
      {"kkt_tol", s.solver.kkt_tol},
      {"trust_floor_m", s.solver.trust_floor},
      {"max_bcd_iters", s.solver.max_bcd_iters},
      {"max_sca_iters", s.solver.max_sca_iters},
      {"max_tr_iters", s.solver.max_tr_iters},
      {"max_penalty_rounds", s.solver.max_penalty_rounds},
      {"max_newton_iters", s.solver.max_newton_iters},
      {"check_gradients", s.solver.check_gradients},
      {"log_solver", s.solver.log_solver},
  };
  return j.dump(2);
}

void validate(const Scenario& s) {
  require(s.slot_len > 0, "slot_len_s", "must be > 0");
  require(s.horizon > 0, "horizon_s", "must be > 0");
  const int n = grid_slots(s);

  require(s.num_antennas >= 1, "num_antennas", "must be >= 1");
  require(s.spacing_ratio > 0, "spacing_ratio", "must be > 0");
  require(s.p_max_alice > 0, "p_max_alice_w", "must be > 0");
  require(s.p_max_jack > 0, "p_max_jack_w", "must be > 0");
  require(s.noise_bob > 0, "noise_bob_w", "must be > 0");
  require(s.noise_eve > 0, "noise_eve_w", "must be > 0");
  require(s.pathloss_ref > 0, "pathloss_ref_lin", "must be > 0");
  require(s.gamma_sense > 0, "gamma_sense_w", "must be > 0");

  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(in_unit(s.resid_jam_bob), "resid_jam_bob_lin", "must be in [0, 1]");
  require(in_unit(s.resid_jam_eve), "resid_jam_eve_lin", "must be in [0, 1]");
  require(in_unit(s.resid_sense_bob), "resid_sense_bob_lin", "must be in [0, 1]");
  require(in_unit(s.resid_sense_eve), "resid_sense_eve_lin", "must be in [0, 1]");
  require(in_unit(s.tau_weight), "tau_weight", "must be in [0, 1]");

  require(s.alt_alice > 0, "alt_alice_m", "must be > 0");
  require(s.alt_jack > 0, "alt_jack_m", "must be > 0");
  require(s.v_max > 0, "v_max_mps", "must be > 0");
  require(s.d_min >= 0, "d_min_m", "must be >= 0");
  require(s.slots_per_target >= 0, "slots_per_target", "must be >= 0");

  const long long ns = static_cast<long long>(s.slots_per_target) *
                       static_cast<long long>(s.targets.size());
  require(ns <= n, "slots_per_target",
          "slots_per_target * num_targets exceeds the number of slots");

  const double dh2 = (s.alt_alice - s.alt_jack) * (s.alt_alice - s.alt_jack);
  const double dmin2 = s.d_min * s.d_min;
  require((s.alice_start - s.jack_start).squaredNorm() + dh2 >= dmin2 - 1e-9,
          "jack_start_m", "initial UAV separation below d_min");
  require((s.alice_end - s.jack_end).squaredNorm() + dh2 >= dmin2 - 1e-9,
          "jack_end_m", "final UAV separation below d_min");

  const SolverConfig& c = s.solver;
  require(c.trust_radius_init >= 0, "solver.trust_radius_init_m", "must be >= 0");
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  require(in_open_unit(c.shrink_alice), "solver.shrink_alice", "must be in (0, 1)");
  require(in_open_unit(c.shrink_jack), "solver.shrink_jack", "must be in (0, 1)");
  require(c.bcd_tol > 0, "solver.bcd_tol", "must be > 0");
  require(c.beam_tol > 0, "solver.beam_tol", "must be > 0");
  require(c.alice_tol > 0, "solver.alice_tol", "must be > 0");
  require(c.jack_tol > 0, "solver.jack_tol", "must be > 0");
  require(c.penalty_init > 0, "solver.penalty_init", "must be > 0");
  require(in_open_unit(c.penalty_shrink), "solver.penalty_shrink", "must be in (0, 1)");
  require(c.rank_one_tol > 0 && c.rank_one_tol <= 1, "solver.rank_one_tol",
          "must be in (0, 1]");
  require(c.kkt_tol > 0, "solver.kkt_tol", "must be > 0");
  require(c.trust_floor > 0, "solver.trust_floor_m", "must be > 0");
  require(c.max_bcd_iters >= 1, "solver.max_bcd_iters", "must be >= 1");
  require(c.max_sca_iters >= 1, "solver.max_sca_iters", "must be >= 1");
  require(c.max_tr_iters >= 1, "solver.max_tr_iters", "must be >= 1");
  require(c.max_penalty_rounds >= 1, "solver.max_penalty_rounds", "must be >= 1");
  require(c.max_newton_iters >= 1, "solver.max_newton_iters", "must be >= 1");
}

MissionGrid mission_grid(const Scenario& s) {
  MissionGrid g;
  g.num_slots = grid_slots(s);
  g.sensing_slots = s.slots_per_target * static_cast<int>(s.targets.size());
  g.comm_slots = g.num_slots;
  g.max_step = s.v_max * s.slot_len;
  return g;
}

}  // namespace scs

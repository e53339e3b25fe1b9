#include "scs/mission.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "scs/geometry.hpp"
#include "scs/metrics.hpp"

namespace scs::mission {

using nlohmann::json;

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::scs: return "scs";
    case Scheme::fhf: return "fhf";
    case Scheme::fhf_bf: return "fhf-bf";
    case Scheme::single: return "single";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "scs") return Scheme::scs;
  if (name == "fhf") return Scheme::fhf;
  if (name == "fhf-bf" || name == "fhf_bf") return Scheme::fhf_bf;
  if (name == "single") return Scheme::single;
  throw std::invalid_argument("unknown scheme: " + name);
}

beam::ScChannels slot_channels(const Scenario& s, const Vec2& u_alice,
                               const Vec2& u_jack, bool has_jack) {
  beam::ScChannels ch;
  ch.alice_bob = geom::channel_vector(u_alice, s.alt_alice, s.bob_pos,
                                      s.num_antennas, s.spacing_ratio,
                                      s.pathloss_ref);
  ch.alice_eve = geom::channel_vector(u_alice, s.alt_alice, s.eve_pos,
                                      s.num_antennas, s.spacing_ratio,
                                      s.pathloss_ref);
  if (has_jack) {
    ch.jack_bob = geom::channel_vector(u_jack, s.alt_jack, s.bob_pos,
                                       s.num_antennas, s.spacing_ratio,
                                       s.pathloss_ref);
    ch.jack_eve = geom::channel_vector(u_jack, s.alt_jack, s.eve_pos,
                                       s.num_antennas, s.spacing_ratio,
                                       s.pathloss_ref);
  } else {
    ch.jack_bob = ComplexVec(0);
    ch.jack_eve = ComplexVec(0);
  }
  return ch;
}

namespace {

ResidLevels resid_of(const Scenario& s) {
  return {s.resid_jam_bob, s.resid_jam_eve, s.resid_sense_bob, s.resid_sense_eve};
}

Noises noises_of(const Scenario& s) { return {s.noise_bob, s.noise_eve}; }

double slot_rate(const Scenario& s, const Vec2& u_alice, const Vec2& u_jack,
                 bool has_jack, Phase phase, const SlotBeams& beams) {
  const beam::ScChannels ch = slot_channels(s, u_alice, u_jack, has_jack);
  return metrics::secrecy_rate(phase, beams, ch.alice_bob, ch.jack_bob,
                               ch.alice_eve, ch.jack_eve, resid_of(s),
                               noises_of(s), /*clamp=*/true);
}

SlotBeams mrt_slot_beams(const Scenario& s, const Vec2& u_alice,
                         const Vec2& u_jack, bool has_jack) {
  const beam::ScChannels ch = slot_channels(s, u_alice, u_jack, has_jack);
  SlotBeams b = SlotBeams::zero(s.num_antennas);
  b.alice = beam::mrt_lift(ch.alice_bob, s.p_max_alice);
  if (has_jack) b.jack = beam::mrt_lift(ch.jack_eve, s.p_max_jack);
  return b;
}

// Pulls the straight lines apart sideways when the safety separation needs
// horizontal help; the taper keeps the displacement limit intact.
void nudge_apart(const Scenario& s, traj::Trajectory& a, traj::Trajectory& j) {
  if (traj::min_separation(a, j) >= s.d_min - 1e-9) return;
  const int n = a.slots();
  const double dh2 = (s.alt_alice - s.alt_jack) * (s.alt_alice - s.alt_jack);
  const double needed =
      std::sqrt(std::max(0.0, s.d_min * s.d_min - dh2)) / 2.0 + 1e-6;
  const Vec2 dir = (s.alice_end - s.alice_start).norm() > 0
                       ? Vec2(-(s.alice_end - s.alice_start).normalized().y(),
                              (s.alice_end - s.alice_start).normalized().x())
                       : Vec2(0.0, 1.0);
  const double d_max = s.v_max * s.slot_len;
  const double step = (s.alice_end - s.alice_start).norm() / double(n);
  const double slack = std::max(0.0, d_max - step) * 0.9;
  for (int k = 1; k < n; ++k) {
    const double budget = double(std::min(k, n - k)) * slack;
    const double off = std::min(needed, budget);
    a.pts[size_t(k)] += dir * off;
    j.pts[size_t(k)] -= dir * off;
  }
  if (traj::min_separation(a, j) < s.d_min - 1e-6) {
    throw std::runtime_error("initial trajectories cannot satisfy the separation floor");
  }
}

void append_solver_log(std::vector<SolverLogRow>& dst, int slot,
                       const std::vector<conic::IterRecord>& src) {
  for (const auto& rec : src) dst.push_back({slot, rec});
}

}  // namespace

std::vector<double> clamped_rates(const Scenario& s,
                                  const traj::Trajectory& alice,
                                  const traj::Trajectory& jack,
                                  std::span<const SlotBeams> beams,
                                  std::span<const Phase> phases) {
  const bool has_jack = !jack.empty();
  std::vector<double> rates(beams.size());
  for (size_t i = 0; i < beams.size(); ++i) {
    const int n = int(i) + 1;
    rates[i] = slot_rate(s, alice.at(n), has_jack ? jack.at(n) : Vec2::Zero(),
                         has_jack, phases[i], beams[i]);
  }
  return rates;
}

BcdResult run_bcd(const Scenario& s) {
  validate(s);
  const MissionGrid grid = mission_grid(s);
  const int n_slots = grid.num_slots;

  BcdResult out;
  out.alice = traj::straight_line(s.alice_start, s.alice_end, n_slots, s.alt_alice);
  out.jack = traj::straight_line(s.jack_start, s.jack_end, n_slots, s.alt_jack);
  nudge_apart(s, out.alice, out.jack);

  out.beams.reserve(size_t(n_slots));
  for (int n = 1; n <= n_slots; ++n) {
    out.beams.push_back(mrt_slot_beams(s, out.alice.at(n), out.jack.at(n), true));
  }
  const std::vector<Phase> phases(size_t(n_slots), Phase::sc);

  auto mission_asr = [&](const traj::Trajectory& a, const traj::Trajectory& j) {
    const auto rates = clamped_rates(s, a, j, out.beams, phases);
    return metrics::asr(rates);
  };

  double cur_asr = mission_asr(out.alice, out.jack);
  out.trace.push_back({0, cur_asr, 0});

  const ResidLevels resid = resid_of(s);
  const Noises noise = noises_of(s);
  const beam::Budgets budgets{s.p_max_alice, s.p_max_jack};

  for (int outer = 1; outer <= s.solver.max_bcd_iters; ++outer) {
    int reverts = 0;

    // Beamforming block: slots are independent, keep each slot's better set.
    for (int n = 1; n <= n_slots; ++n) {
      const beam::ScChannels ch =
          slot_channels(s, out.alice.at(n), out.jack.at(n), true);
      const auto warm = std::make_pair(out.beams[size_t(n - 1)].alice,
                                       out.beams[size_t(n - 1)].jack);
      const beam::ScSlotResult res =
          beam::solve_sc_slot(ch, resid, noise, budgets, s.solver, warm);
      out.conic_solves += res.log.conic_solves;
      if (s.solver.log_solver) append_solver_log(out.solver_log, n, res.log.solver_log);
      if (!res.log.solver_ok || !res.log.rank_one_ok) {
        out.degraded = out.degraded || !res.log.solver_ok;
        if (!res.log.rank_one_ok) {
          out.notes.push_back("slot " + std::to_string(n) +
                              ": rank-one ratio below tolerance (" +
                              std::to_string(std::min(res.log.ratio_alice,
                                                      res.log.ratio_jack)) + ")");
        }
      }
      SlotBeams cand = SlotBeams::zero(s.num_antennas);
      cand.alice = Hermitian::outer(res.w_alice);
      cand.jack = Hermitian::outer(res.w_jack);
      const double old_rate =
          slot_rate(s, out.alice.at(n), out.jack.at(n), true, Phase::sc,
                    out.beams[size_t(n - 1)]);
      const double new_rate =
          slot_rate(s, out.alice.at(n), out.jack.at(n), true, Phase::sc, cand);
      if (new_rate + 1e-12 >= old_rate) {
        out.beams[size_t(n - 1)] = cand;
      } else {
        ++reverts;
      }
    }
    cur_asr = mission_asr(out.alice, out.jack);

    // Alice trajectory block.
    {
      const traj::TrajUpdateResult res =
          traj::solve_alice_trajectory(s, out.alice, out.jack, out.beams);
      out.conic_solves += res.conic_solves;
      const double cand_asr = mission_asr(res.path, out.jack);
      if (cand_asr + 1e-12 >= cur_asr) {
        out.alice = res.path;
        cur_asr = cand_asr;
      } else {
        ++reverts;
      }
    }

    // Jack trajectory block.
    {
      const traj::TrajUpdateResult res =
          traj::solve_jack_trajectory(s, out.jack, out.alice, out.beams);
      out.conic_solves += res.conic_solves;
      const double cand_asr = mission_asr(out.alice, res.path);
      if (cand_asr + 1e-12 >= cur_asr) {
        out.jack = res.path;
        cur_asr = cand_asr;
      } else {
        ++reverts;
      }
    }

    const double prev_asr = out.trace.back().asr;
    out.trace.push_back({outer, cur_asr, reverts});
    if (cur_asr - prev_asr <= s.solver.bcd_tol) break;
  }
  return out;
}

namespace {

// Select sensing slots from the flown trajectory and either re-solve them
// with the gain floor (optimized schemes) or just report the gains.
void apply_sensing(const Scenario& s, MissionResult& r, bool optimize) {
  const MissionGrid grid = mission_grid(s);
  if (grid.sensing_slots == 0 || s.targets.empty()) return;

  const traj::Trajectory jack_or_empty = r.has_jack ? r.jack : traj::Trajectory{};
  const sched::DistanceTable table = sched::distance_table(s, r.alice, jack_or_empty);
  r.assignment = sched::greedy_select(table, s.slots_per_target);

  const ResidLevels resid = resid_of(s);
  const Noises noise = noises_of(s);
  const beam::Budgets budgets{s.p_max_alice, r.has_jack ? s.p_max_jack : 0.0};

  for (size_t k = 0; k < r.assignment.slots_per_target.size(); ++k) {
    for (int slot : r.assignment.slots_per_target[k]) {
      r.phases[size_t(slot - 1)] = Phase::scs;
      const Vec2 u_a = r.alice.at(slot);
      const Vec2 u_j = r.has_jack ? r.jack.at(slot) : Vec2::Zero();
      const Vec2 g = s.targets[k];

      if (optimize) {
        beam::SenseGeometry geo;
        geo.steer_alice = geom::steering_vector(
            s.num_antennas, s.spacing_ratio,
            geom::departure_angle(u_a, s.alt_alice, g));
        geo.dist2_alice = (u_a - g).squaredNorm() + s.alt_alice * s.alt_alice;
        if (r.has_jack) {
          geo.steer_jack = geom::steering_vector(
              s.num_antennas, s.spacing_ratio,
              geom::departure_angle(u_j, s.alt_jack, g));
          geo.dist2_jack = (u_j - g).squaredNorm() + s.alt_jack * s.alt_jack;
        } else {
          geo.steer_jack = ComplexVec(0);
          geo.dist2_jack = 1.0;
        }
        const beam::ScChannels ch = slot_channels(s, u_a, u_j, r.has_jack);
        try {
          const beam::ScsSlotResult res = beam::solve_scs_slot(
              ch, geo, resid, noise, budgets, s.gamma_sense, s.solver);
          r.conic_solves += res.log.conic_solves;
          if (s.solver.log_solver) append_solver_log(r.solver_log, slot, res.log.solver_log);
          r.beams[size_t(slot - 1)] = res.stored;
          if (!res.stored_rank_one || !res.log.rank_one_ok) {
            r.notes.push_back("slot " + std::to_string(slot) +
                              ": sensing beams kept a relaxed/low-rank form");
          }
          if (!res.log.solver_ok) r.degraded = true;
        } catch (const beam::SensingInfeasible& e) {
          r.degraded = true;
          r.notes.push_back("slot " + std::to_string(slot) +
                            ": sensing infeasible for target " +
                            std::to_string(k + 1) + " (achievable " +
                            std::to_string(e.achievable) + " W)");
        }
      }

      const double gain = metrics::beampattern_gain(
          r.beams[size_t(slot - 1)], u_a, u_j, g, s.alt_alice, s.alt_jack,
          s.spacing_ratio);
      const bool feasible = gain >= s.gamma_sense * (1.0 - 1e-8);
      r.gains.push_back({slot, int(k), gain, s.gamma_sense, feasible});
      if (optimize && !feasible) r.degraded = true;
    }
  }
}

void finalize(const Scenario& s, MissionResult& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.rates = clamped_rates(s, r.alice, r.has_jack ? r.jack : traj::Trajectory{},
                          r.beams, r.phases);
  r.asr_overall = metrics::asr(r.rates);
  std::vector<double> sc_rates, scs_rates;
  for (size_t i = 0; i < r.rates.size(); ++i) {
    (r.phases[i] == Phase::sc ? sc_rates : scs_rates).push_back(r.rates[i]);
  }
  r.asr_sc = sc_rates.empty() ? nan : metrics::asr(sc_rates);
  r.asr_scs = scs_rates.empty() ? nan : metrics::asr(scs_rates);

  const MissionGrid grid = mission_grid(s);
  FeasibilityReport& f = r.feasibility;
  const traj::PathCheck pa =
      traj::check_path(r.alice, s.alice_start, s.alice_end, grid.max_step);
  f.alice_path_ok = pa.ok();
  if (!pa.ok()) f.violations.push_back("alice path violates maneuvering limits");
  if (r.has_jack) {
    const traj::PathCheck pj =
        traj::check_path(r.jack, s.jack_start, s.jack_end, grid.max_step);
    f.jack_path_ok = pj.ok();
    if (!pj.ok()) f.violations.push_back("jack path violates maneuvering limits");
    f.min_separation = traj::min_separation(r.alice, r.jack);
    f.separation_ok = f.min_separation >= s.d_min - 1e-6;
    if (!f.separation_ok) {
      f.violations.push_back("inter-UAV separation below d_min");
    }
  } else {
    f.min_separation = std::numeric_limits<double>::infinity();
    f.separation_ok = true;
  }
  f.budgets_ok = true;
  for (size_t i = 0; i < r.beams.size(); ++i) {
    if (!beams_within_budget(r.beams[i], s.p_max_alice,
                             r.has_jack ? s.p_max_jack : 0.0, 1e-8)) {
      f.budgets_ok = false;
      f.violations.push_back("slot " + std::to_string(i + 1) +
                             " exceeds a power budget");
    }
  }

  if (!f.alice_path_ok || !f.jack_path_ok || !f.budgets_ok) r.degraded = true;
  // Fixed benchmark paths may fly closer than d_min; that is reported, not
  // treated as a failure of those schemes.
  if (r.scheme == Scheme::scs && !f.separation_ok) r.degraded = true;
}

MissionResult benchmark_mission(Scheme scheme, const Scenario& s) {
  validate(s);
  const MissionGrid grid = mission_grid(s);
  const int n_slots = grid.num_slots;

  MissionResult r;
  r.scheme = scheme;
  r.rng_seed = s.rng_seed;
  r.has_jack = scheme != Scheme::single;
  r.alice = traj::fhf_trajectory(s, /*for_alice=*/true);
  if (r.has_jack) r.jack = traj::fhf_trajectory(s, /*for_alice=*/false);
  r.phases.assign(size_t(n_slots), Phase::sc);
  r.beams.reserve(size_t(n_slots));
  for (int n = 1; n <= n_slots; ++n) {
    r.beams.push_back(mrt_slot_beams(s, r.alice.at(n),
                                     r.has_jack ? r.jack.at(n) : Vec2::Zero(),
                                     r.has_jack));
  }

  if (scheme == Scheme::fhf_bf) {
    const ResidLevels resid = resid_of(s);
    const Noises noise = noises_of(s);
    const beam::Budgets budgets{s.p_max_alice, s.p_max_jack};
    for (int n = 1; n <= n_slots; ++n) {
      const beam::ScChannels ch = slot_channels(s, r.alice.at(n), r.jack.at(n), true);
      const beam::ScSlotResult res =
          beam::solve_sc_slot(ch, resid, noise, budgets, s.solver);
      r.conic_solves += res.log.conic_solves;
      if (s.solver.log_solver) append_solver_log(r.solver_log, n, res.log.solver_log);
      if (!res.log.solver_ok) r.degraded = true;
      r.beams[size_t(n - 1)].alice = Hermitian::outer(res.w_alice);
      r.beams[size_t(n - 1)].jack = Hermitian::outer(res.w_jack);
    }
  }

  apply_sensing(s, r, /*optimize=*/scheme == Scheme::fhf_bf);
  finalize(s, r);
  return r;
}

}  // namespace

MissionResult run_two_phase(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  BcdResult b = run_bcd(s);

  MissionResult r;
  r.scheme = Scheme::scs;
  r.rng_seed = s.rng_seed;
  r.alice = std::move(b.alice);
  r.jack = std::move(b.jack);
  r.has_jack = true;
  r.beams = std::move(b.beams);
  r.phases.assign(r.beams.size(), Phase::sc);
  r.trace = std::move(b.trace);
  r.solver_log = std::move(b.solver_log);
  r.conic_solves = b.conic_solves;
  r.degraded = b.degraded;
  r.notes = std::move(b.notes);

  apply_sensing(s, r, /*optimize=*/true);
  finalize(s, r);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MissionResult run_scheme(Scheme scheme, const Scenario& s) {
  if (scheme == Scheme::scs) return run_two_phase(s);
  const auto t0 = std::chrono::steady_clock::now();
  MissionResult r = benchmark_mission(scheme, s);
  r.rng_seed = s.rng_seed;
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

json herm_to_json(const Hermitian& h) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < h.dim(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < h.dim(); ++c) {
      row.push_back({h(r, c).real(), h(r, c).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

json traj_to_json(const traj::Trajectory& t) {
  json pts = json::array();
  for (const auto& p : t.pts) pts.push_back({p.x(), p.y()});
  return json{{"altitude_m", t.altitude}, {"points_m", pts}};
}

json double_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string mission_to_json(const MissionResult& r, const Scenario& s) {
  json j;
  j["schema"] = "scs-mission-v1";
  j["scheme"] = scheme_name(r.scheme);
  j["rng_seed"] = r.rng_seed;
  j["degraded"] = r.degraded;
  j["notes"] = r.notes;
  j["asr_sc"] = double_or_null(r.asr_sc);
  j["asr_scs"] = double_or_null(r.asr_scs);
  j["asr_overall"] = r.asr_overall;
  j["num_slots"] = int(r.rates.size());
  j["rates"] = r.rates;
  json phases = json::array();
  for (Phase p : r.phases) phases.push_back(phase_name(p));
  j["phases"] = phases;
  j["trajectory"]["alice"] = traj_to_json(r.alice);
  j["trajectory"]["jack"] = r.has_jack ? traj_to_json(r.jack) : json(nullptr);
  json beams = json::array();
  for (const auto& b : r.beams) {
    beams.push_back({{"alice", herm_to_json(b.alice)},
                     {"jack", herm_to_json(b.jack)},
                     {"sense", herm_to_json(b.sense)}});
  }
  j["beams_w"] = beams;
  json gains = json::array();
  for (const auto& g : r.gains) {
    gains.push_back({{"slot", g.slot},
                     {"target", g.target + 1},
                     {"gain_w", g.gain},
                     {"threshold_w", g.threshold},
                     {"feasible", g.feasible}});
  }
  j["gains"] = gains;
  json assignment = json::array();
  for (size_t k = 0; k < r.assignment.slots_per_target.size(); ++k) {
    assignment.push_back(
        {{"target", k + 1}, {"slots", r.assignment.slots_per_target[k]}});
  }
  j["assignment"] = assignment;
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"outer", t.outer}, {"asr", t.asr}, {"reverts", t.reverts}});
  }
  j["bcd_trace"] = trace;
  j["feasibility"] = {
      {"alice_path_ok", r.feasibility.alice_path_ok},
      {"jack_path_ok", r.feasibility.jack_path_ok},
      {"budgets_ok", r.feasibility.budgets_ok},
      {"min_separation_m", std::isfinite(r.feasibility.min_separation)
                               ? json(r.feasibility.min_separation)
                               : json(nullptr)},
      {"separation_ok", r.feasibility.separation_ok},
      {"violations", r.feasibility.violations},
  };
  j["wall_seconds"] = r.wall_seconds;
  j["conic_solves"] = r.conic_solves;
  j["nodes"] = {
      {"bob_m", {s.bob_pos.x(), s.bob_pos.y()}},
      {"eve_m", {s.eve_pos.x(), s.eve_pos.y()}},
  };
  json targets = json::array();
  for (const auto& t : s.targets) targets.push_back({t.x(), t.y()});
  j["nodes"]["targets_m"] = targets;
  return j.dump(2);
}

}  // namespace scs::mission

#include "scs/beam_scs.hpp"

#include <cmath>
#include <limits>

namespace scs::beam {

namespace {
constexpr double kZeroBudget = 1e-15;
// Internal headroom on the gain floor so rank-one extraction losses on the
// jamming covariance cannot drag the stored beams below the requested level.
constexpr double kGainMargin = 1.02;
const double kLog2e = 1.0 / std::log(2.0);

double quad_or_zero(const Hermitian& w, const ComplexVec& h) {
  return (w.empty() || h.size() == 0) ? 0.0 : w.quad(h);
}
}  // namespace

double scs_rate_lifted(const Hermitian& w_alice, const Hermitian& w_jack,
                       const Hermitian& sense, const ScChannels& ch,
                       const ResidLevels& resid, const Noises& noise) {
  const double den_bob = resid.sense_bob * quad_or_zero(sense, ch.alice_bob) +
                         resid.jam_bob * quad_or_zero(w_jack, ch.jack_bob) +
                         noise.bob;
  const double den_eve = resid.sense_eve * quad_or_zero(sense, ch.alice_eve) +
                         resid.jam_eve * quad_or_zero(w_jack, ch.jack_eve) +
                         noise.eve;
  const double num_bob = quad_or_zero(w_alice, ch.alice_bob) + den_bob;
  const double num_eve = quad_or_zero(w_alice, ch.alice_eve) + den_eve;
  return std::log2(num_bob) - std::log2(den_bob) - std::log2(num_eve) +
         std::log2(den_eve);
}

double ScsBound::value(const Hermitian& w_alice, const Hermitian& w_jack,
                       const Hermitian& sense) const {
  auto log_value = [&](const conic::LogTerm& t) {
    double s = t.offset;
    const Hermitian* blocks[3] = {&w_alice, &w_jack, &sense};
    for (size_t i = 0; i < t.mats.size() && i < 3; ++i) {
      if (!t.mats[i].empty() && !blocks[i]->empty()) {
        s += t.mats[i].inner(*blocks[i]);
      }
    }
    return t.weight * std::log(s);
  };
  double v = log_value(bob_log) + log_value(eve_log) + constant;
  if (!lin_alice.empty() && !w_alice.empty()) v += lin_alice.inner(w_alice);
  if (!lin_jack.empty() && !w_jack.empty()) v += lin_jack.inner(w_jack);
  if (!lin_sense.empty() && !sense.empty()) v += lin_sense.inner(sense);
  return v;
}

ScsBound build_scs_bound(const Hermitian& wa_exp, const Hermitian& wj_exp,
                         const Hermitian& rr_exp, const ScChannels& ch,
                         const ResidLevels& resid, const Noises& noise) {
  const Eigen::Index m = ch.alice_bob.size();
  const Hermitian h_ab = Hermitian::outer(ch.alice_bob);
  const Hermitian h_ae = Hermitian::outer(ch.alice_eve);
  const Hermitian h_jb = Hermitian::outer(ch.jack_bob);
  const Hermitian h_je = Hermitian::outer(ch.jack_eve);

  const double d2 = resid.sense_bob * quad_or_zero(rr_exp, ch.alice_bob) +
                    resid.jam_bob * quad_or_zero(wj_exp, ch.jack_bob) + noise.bob;
  const double d3 = quad_or_zero(wa_exp, ch.alice_eve) +
                    resid.sense_eve * quad_or_zero(rr_exp, ch.alice_eve) +
                    resid.jam_eve * quad_or_zero(wj_exp, ch.jack_eve) + noise.eve;

  ScsBound bd;
  bd.a = std::log2(d3) + std::log2(d2);
  bd.b = kLog2e / d3;
  bd.c = kLog2e / d2;

  bd.bob_log.weight = kLog2e;
  bd.bob_log.mats = {h_ab, h_jb * resid.jam_bob, h_ab * resid.sense_bob};
  bd.bob_log.offset = noise.bob;
  bd.eve_log.weight = kLog2e;
  bd.eve_log.mats = {Hermitian(), h_je * resid.jam_eve, h_ae * resid.sense_eve};
  bd.eve_log.offset = noise.eve;

  bd.lin_alice = h_ae * (-bd.b);
  bd.lin_jack = Hermitian::zero(m);
  bd.lin_jack += h_je * (-bd.b * resid.jam_eve);
  bd.lin_jack += h_jb * (-bd.c * resid.jam_bob);
  bd.lin_sense = Hermitian::zero(m);
  bd.lin_sense += h_ae * (-bd.b * resid.sense_eve);
  bd.lin_sense += h_ab * (-bd.c * resid.sense_bob);
  bd.constant = -bd.a + bd.b * (d3 - noise.eve) + bd.c * (d2 - noise.bob);
  return bd;
}

namespace {

Hermitian penalty_matrix(const Hermitian& w_exp, double iota) {
  Hermitian p = Hermitian::identity(w_exp.dim());
  if (w_exp.trace() > 0.0) {
    p -= Hermitian::outer(w_exp.top_eigenpair().second);
  }
  return p * (-1.0 / iota);
}

double safe_ratio(const Hermitian& w, double budget) {
  if (w.empty() || w.trace() <= 1e-12 * std::max(1.0, budget)) return 1.0;
  return w.top_eigenpair().first / w.trace();
}

double gain_of(const Hermitian& w_alice, const Hermitian& w_jack,
               const Hermitian& sense, const SenseGeometry& geo) {
  double g = 0.0;
  if (!w_alice.empty()) g += w_alice.quad(geo.steer_alice) / geo.dist2_alice;
  if (!sense.empty()) g += sense.quad(geo.steer_alice) / geo.dist2_alice;
  if (!w_jack.empty()) g += w_jack.quad(geo.steer_jack) / geo.dist2_jack;
  return g;
}

}  // namespace

ScsSlotResult solve_scs_slot(const ScChannels& ch, const SenseGeometry& geo,
                             const ResidLevels& resid, const Noises& noise,
                             const Budgets& budgets, double gain_floor,
                             const SolverConfig& cfg) {
  const Eigen::Index m = ch.alice_bob.size();
  const double md = double(m);
  const bool alice_on = budgets.alice > kZeroBudget;
  const bool jack_on = budgets.jack > kZeroBudget;

  ScsSlotResult out;
  out.w_alice = ComplexVec::Zero(m);
  out.w_jack = ComplexVec::Zero(m);
  out.cov_alice = Hermitian::zero(m);
  out.cov_jack = Hermitian::zero(m);
  out.sense_cov = Hermitian::zero(m);

  out.max_gain = (alice_on ? md * budgets.alice / geo.dist2_alice : 0.0) +
                 (jack_on ? md * budgets.jack / geo.dist2_jack : 0.0);
  const bool constrained = gain_floor > 0.0;
  if (constrained && gain_floor > out.max_gain * (1.0 - 1e-5)) {
    throw SensingInfeasible(gain_floor, out.max_gain);
  }
  if (!alice_on && !jack_on) return out;

  const double gain_target =
      constrained
          ? std::min(gain_floor * kGainMargin,
                     gain_floor + 0.25 * (out.max_gain - gain_floor))
          : 0.0;

  // Strictly feasible solver start: scaled identities blended toward the
  // maximum-gain point until the (inflated) floor holds strictly.
  Hermitian start_alice = alice_on ? Hermitian::identity(m, budgets.alice / (4.0 * md))
                                   : Hermitian();
  Hermitian start_sense = start_alice;
  Hermitian start_jack = jack_on ? Hermitian::identity(m, budgets.jack / (2.0 * md))
                                 : Hermitian();
  if (constrained) {
    const double g_id = gain_of(start_alice, start_jack, start_sense, geo);
    const double need = gain_target * (1.0 + 1e-6);
    if (g_id < need) {
      const double scale = 1.0 - 1e-6;
      const Hermitian gain_sense =
          alice_on ? Hermitian::outer(geo.steer_alice) * (scale * budgets.alice / md)
                   : Hermitian();
      const Hermitian gain_jack =
          jack_on ? Hermitian::outer(geo.steer_jack) * (scale * budgets.jack / md)
                  : Hermitian();
      const double g_max = gain_of(Hermitian::zero(m), gain_jack, gain_sense, geo);
      const double theta =
          std::min((need - g_id) / std::max(g_max - g_id, 1e-300), 1.0 - 1e-6);
      auto blend = [&](const Hermitian& a, const Hermitian& b) {
        return a * (1.0 - theta) + b * theta;
      };
      if (alice_on) {
        start_alice *= (1.0 - theta);
        start_sense = blend(start_sense, gain_sense);
      }
      if (jack_on) start_jack = blend(start_jack, gain_jack);
      if (gain_of(start_alice, start_jack, start_sense, geo) <= gain_target) {
        throw SensingInfeasible(gain_floor, out.max_gain);
      }
    }
  }

  // Expansion point: quarter-budget matched lifts plus an isotropic sensing
  // covariance.
  Hermitian wa = alice_on ? mrt_lift(ch.alice_bob, budgets.alice / 4.0)
                          : Hermitian::zero(m);
  Hermitian wj = jack_on ? mrt_lift(ch.jack_eve, budgets.jack / 4.0)
                         : Hermitian::zero(m);
  Hermitian rr = alice_on ? Hermitian::identity(m, budgets.alice / (4.0 * md))
                          : Hermitian::zero(m);
  if (wa.empty() || wa.dim() != m) wa = Hermitian::zero(m);
  if (wj.empty() || wj.dim() != m) wj = Hermitian::zero(m);

  // Block layout: [alice, jack, sense], inactive roles dropped.
  int idx_alice = -1, idx_jack = -1, idx_sense = -1;
  std::vector<int> dims;
  if (alice_on) { idx_alice = int(dims.size()); dims.push_back(int(m)); }
  if (jack_on) { idx_jack = int(dims.size()); dims.push_back(int(m)); }
  if (alice_on) { idx_sense = int(dims.size()); dims.push_back(int(m)); }
  auto place = [&](const Hermitian& a, const Hermitian& j, const Hermitian& s) {
    std::vector<Hermitian> v(dims.size());
    if (idx_alice >= 0) v[idx_alice] = a;
    if (idx_jack >= 0) v[idx_jack] = j;
    if (idx_sense >= 0) v[idx_sense] = s;
    return v;
  };

  conic::SolveOptions opts;
  opts.tol = cfg.kkt_tol;
  opts.max_newton_iters = cfg.max_newton_iters;
  opts.capture_log = cfg.log_solver;

  double iota = cfg.penalty_init;
  double prev_bound = -std::numeric_limits<double>::infinity();
  BeamLog& log = out.log;

  for (int round = 0; round < cfg.max_penalty_rounds; ++round) {
    log.penalty_rounds = round + 1;
    log.final_penalty = iota;
    for (int it = 0; it < cfg.max_sca_iters; ++it) {
      const ScsBound bd = build_scs_bound(wa, wj, rr, ch, resid, noise);

      conic::PsdLogProgram prog;
      prog.block_dims = dims;
      auto strip = [&](const std::vector<Hermitian>& role_mats) {
        return place(role_mats[0], role_mats[1], role_mats[2]);
      };
      conic::LogTerm bob = bd.bob_log, eve = bd.eve_log;
      bob.mats = strip(bob.mats);
      eve.mats = strip(eve.mats);
      prog.log_terms = {bob, eve};
      prog.linear = place(alice_on ? bd.lin_alice + penalty_matrix(wa, iota) : Hermitian(),
                          jack_on ? bd.lin_jack + penalty_matrix(wj, iota) : Hermitian(),
                          bd.lin_sense);
      prog.constant = bd.constant;

      if (alice_on) {
        conic::LinearIneq budget_a;  // tr(W_a) + tr(R_r) <= P_a
        budget_a.mats = place(Hermitian::identity(m), Hermitian(), Hermitian::identity(m));
        budget_a.bound = budgets.alice;
        prog.ineqs.push_back(budget_a);
      }
      if (jack_on) {
        conic::LinearIneq budget_j;
        budget_j.mats = place(Hermitian(), Hermitian::identity(m), Hermitian());
        budget_j.bound = budgets.jack;
        prog.ineqs.push_back(budget_j);
      }
      if (constrained) {
        conic::LinearIneq floor_ineq;  // -gain <= -target
        floor_ineq.mats =
            place(Hermitian::outer(geo.steer_alice) * (-1.0 / geo.dist2_alice),
                  Hermitian::outer(geo.steer_jack) * (-1.0 / geo.dist2_jack),
                  Hermitian::outer(geo.steer_alice) * (-1.0 / geo.dist2_alice));
        floor_ineq.bound = -gain_target;
        prog.ineqs.push_back(floor_ineq);
      }

      const std::vector<Hermitian> start = place(start_alice, start_jack, start_sense);
      const conic::PsdSolution sol = conic::solve_psd_log(prog, start, opts);
      ++log.conic_solves;
      ++log.sca_iters;
      log.solver_ok = log.solver_ok && sol.info.status == conic::SolveStatus::optimal;
      if (cfg.log_solver) {
        log.solver_log.insert(log.solver_log.end(), sol.info.log.begin(),
                              sol.info.log.end());
      }
      if (sol.info.status == conic::SolveStatus::infeasible_start) break;

      if (idx_alice >= 0) wa = sol.blocks[idx_alice];
      if (idx_jack >= 0) wj = sol.blocks[idx_jack];
      if (idx_sense >= 0) rr = sol.blocks[idx_sense];
      const double bval = bd.value(wa, wj, rr);
      log.bound_trace.push_back(bval);
      log.rate_trace.push_back(scs_rate_lifted(wa, wj, rr, ch, resid, noise));
      const double gain = bval - prev_bound;
      prev_bound = bval;
      if (gain <= cfg.beam_tol) break;
    }

    log.ratio_alice = safe_ratio(wa, budgets.alice);
    log.ratio_jack = jack_on ? safe_ratio(wj, budgets.jack) : 1.0;
    if (log.ratio_alice >= cfg.rank_one_tol && log.ratio_jack >= cfg.rank_one_tol) {
      break;
    }
    iota *= cfg.penalty_shrink;
  }
  log.rank_one_ok = log.ratio_alice >= cfg.rank_one_tol &&
                    log.ratio_jack >= cfg.rank_one_tol;

  out.cov_alice = wa;
  out.cov_jack = wj;
  out.sense_cov = rr;
  if (wa.trace() > kZeroBudget) {
    out.w_alice = extract_rank_one(wa).w;
    // Fold the extraction residue into the sensing covariance; the combined
    // Alice-side covariance (and with it budget and target gain) is unchanged.
    out.sense_cov += wa - Hermitian::outer(out.w_alice);
  }
  if (jack_on && wj.trace() > kZeroBudget) out.w_jack = extract_rank_one(wj).w;

  out.stored = {Hermitian::outer(out.w_alice), Hermitian::outer(out.w_jack),
                out.sense_cov};
  out.achieved_gain = gain_of(out.stored.alice, out.stored.jack, out.stored.sense, geo);
  if (constrained && out.achieved_gain < gain_floor * (1.0 - 1e-9)) {
    // Jamming-side extraction loss ate the margin; keep the relaxed forms,
    // which satisfy the floor by construction.
    out.stored = {wa, wj, rr};
    out.stored_rank_one = false;
    out.achieved_gain = gain_of(wa, wj, rr, geo);
  }
  return out;
}

}  // namespace scs::beam

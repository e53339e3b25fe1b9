#include "scs/beam_sc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scs::beam {

namespace {
constexpr double kZeroBudget = 1e-15;
const double kLog2e = 1.0 / std::log(2.0);

double quad_or_zero(const Hermitian& w, const ComplexVec& h) {
  return (w.empty() || h.size() == 0) ? 0.0 : w.quad(h);
}
}  // namespace

Hermitian mrt_lift(const ComplexVec& h, double power) {
  const double n2 = h.squaredNorm();
  if (n2 <= 0.0 || power <= 0.0) return Hermitian::zero(h.size());
  ComplexVec w = h * std::sqrt(power / n2);
  return Hermitian::outer(w);
}

double sc_rate_lifted(const Hermitian& w_alice, const Hermitian& w_jack,
                      const ScChannels& ch, const ResidLevels& resid,
                      const Noises& noise) {
  const double den_bob = resid.jam_bob * quad_or_zero(w_jack, ch.jack_bob) + noise.bob;
  const double den_eve = resid.jam_eve * quad_or_zero(w_jack, ch.jack_eve) + noise.eve;
  const double num_bob = quad_or_zero(w_alice, ch.alice_bob) + den_bob;
  const double num_eve = quad_or_zero(w_alice, ch.alice_eve) + den_eve;
  return std::log2(num_bob) - std::log2(den_bob) - std::log2(num_eve) +
         std::log2(den_eve);
}

double ScBound::value(const Hermitian& w_alice, const Hermitian& w_jack) const {
  auto log_value = [&](const conic::LogTerm& t) {
    double s = t.offset;
    if (!t.mats[0].empty()) s += t.mats[0].inner(w_alice);
    if (t.mats.size() > 1 && !t.mats[1].empty() && !w_jack.empty()) {
      s += t.mats[1].inner(w_jack);
    }
    return t.weight * std::log(s);
  };
  double v = log_value(bob_log) + log_value(eve_log) + constant;
  if (!lin_alice.empty()) v += lin_alice.inner(w_alice);
  if (!lin_jack.empty() && !w_jack.empty()) v += lin_jack.inner(w_jack);
  return v;
}

ScBound build_sc_bound(const Hermitian& wa_exp, const Hermitian& wj_exp,
                       const ScChannels& ch, const ResidLevels& resid,
                       const Noises& noise) {
  const Eigen::Index m = ch.alice_bob.size();
  const Hermitian h_ab = Hermitian::outer(ch.alice_bob);
  const Hermitian h_ae = Hermitian::outer(ch.alice_eve);
  const Hermitian h_jb = Hermitian::outer(ch.jack_bob);
  const Hermitian h_je = Hermitian::outer(ch.jack_eve);

  const double d2 = resid.jam_bob * quad_or_zero(wj_exp, ch.jack_bob) + noise.bob;
  const double d3 = quad_or_zero(wa_exp, ch.alice_eve) +
                    resid.jam_eve * quad_or_zero(wj_exp, ch.jack_eve) + noise.eve;

  ScBound bd;
  bd.a = std::log2(d3) + std::log2(d2);
  bd.b = kLog2e / d3;
  bd.c = kLog2e / d2;

  bd.bob_log.weight = kLog2e;
  bd.bob_log.mats = {h_ab, h_jb * resid.jam_bob};
  bd.bob_log.offset = noise.bob;
  bd.eve_log.weight = kLog2e;
  bd.eve_log.mats = {Hermitian(), h_je * resid.jam_eve};
  bd.eve_log.offset = noise.eve;

  bd.lin_alice = h_ae * (-bd.b);
  bd.lin_jack = Hermitian::zero(m);
  bd.lin_jack += h_je * (-bd.b * resid.jam_eve);
  bd.lin_jack += h_jb * (-bd.c * resid.jam_bob);
  // the linear parts carry only the covariance terms, so the expansion
  // offsets enter without their noise floors
  bd.constant = -bd.a + bd.b * (d3 - noise.eve) + bd.c * (d2 - noise.bob);
  return bd;
}

RankOne extract_rank_one(const Hermitian& w) {
  if (!(w.trace() > 0.0)) {
    throw std::invalid_argument("extract_rank_one: zero-trace covariance");
  }
  auto [lambda, v] = w.top_eigenpair();
  RankOne r;
  r.ratio = lambda / w.trace();
  r.w = v * std::sqrt(std::max(lambda, 0.0));
  const double scale = r.w.norm();
  for (Eigen::Index i = 0; i < r.w.size(); ++i) {
    if (std::abs(r.w(i)) > 1e-14 * scale) {
      r.w *= std::polar(1.0, -std::arg(r.w(i)));
      break;
    }
  }
  return r;
}

namespace {

// Affine rank-one penalty around the expansion point: trace mass outside the
// principal eigenvector, weighted by 1/iota.
Hermitian penalty_matrix(const Hermitian& w_exp, double iota) {
  const Eigen::Index m = w_exp.dim();
  Hermitian p = Hermitian::identity(m);
  if (w_exp.trace() > 0.0) {
    p -= Hermitian::outer(w_exp.top_eigenpair().second);
  }
  return p * (-1.0 / iota);
}

double safe_ratio(const Hermitian& w, double budget) {
  if (w.empty() || w.trace() <= 1e-12 * std::max(1.0, budget)) return 1.0;
  return w.top_eigenpair().first / w.trace();
}

}  // namespace

ScSlotResult solve_sc_slot(
    const ScChannels& ch, const ResidLevels& resid, const Noises& noise,
    const Budgets& budgets, const SolverConfig& cfg,
    const std::optional<std::pair<Hermitian, Hermitian>>& warm) {
  const Eigen::Index m = ch.alice_bob.size();
  ScSlotResult out;
  out.w_alice = ComplexVec::Zero(m);
  out.w_jack = ComplexVec::Zero(m);
  out.cov_alice = Hermitian::zero(m);
  out.cov_jack = Hermitian::zero(m);
  if (budgets.alice <= kZeroBudget) return out;

  const bool jack_on = budgets.jack > kZeroBudget;
  Hermitian wa = warm ? warm->first : mrt_lift(ch.alice_bob, budgets.alice / 2.0);
  Hermitian wj = jack_on
                     ? (warm ? warm->second : mrt_lift(ch.jack_eve, budgets.jack / 2.0))
                     : Hermitian::zero(m);
  if (wa.empty() || wa.dim() != m) wa = Hermitian::zero(m);
  if (wj.empty() || wj.dim() != m) wj = Hermitian::zero(m);

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
      const ScBound bd = build_sc_bound(wa, wj, ch, resid, noise);

      conic::PsdLogProgram prog;
      std::vector<Hermitian> start;
      prog.block_dims = {int(m)};
      start.push_back(Hermitian::identity(m, budgets.alice / (2.0 * double(m))));
      if (jack_on) {
        prog.block_dims.push_back(int(m));
        start.push_back(Hermitian::identity(m, budgets.jack / (2.0 * double(m))));
      }
      prog.log_terms = {bd.bob_log, bd.eve_log};
      prog.linear = {bd.lin_alice + penalty_matrix(wa, iota)};
      if (jack_on) prog.linear.push_back(bd.lin_jack + penalty_matrix(wj, iota));
      prog.constant = bd.constant;
      conic::LinearIneq tr_a;
      tr_a.mats = {Hermitian::identity(m)};
      if (jack_on) tr_a.mats.push_back(Hermitian());
      tr_a.bound = budgets.alice;
      prog.ineqs.push_back(tr_a);
      if (jack_on) {
        conic::LinearIneq tr_j;
        tr_j.mats = {Hermitian(), Hermitian::identity(m)};
        tr_j.bound = budgets.jack;
        prog.ineqs.push_back(tr_j);
      }

      const conic::PsdSolution sol = conic::solve_psd_log(prog, start, opts);
      ++log.conic_solves;
      ++log.sca_iters;
      log.solver_ok = log.solver_ok && sol.info.status == conic::SolveStatus::optimal;
      if (cfg.log_solver) {
        log.solver_log.insert(log.solver_log.end(), sol.info.log.begin(),
                              sol.info.log.end());
      }
      if (sol.info.status == conic::SolveStatus::infeasible_start) break;

      wa = sol.blocks[0];
      if (jack_on) wj = sol.blocks[1];
      const double bval = bd.value(wa, wj);
      log.bound_trace.push_back(bval);
      log.rate_trace.push_back(sc_rate_lifted(wa, wj, ch, resid, noise));
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
  if (wa.trace() > kZeroBudget) out.w_alice = extract_rank_one(wa).w;
  if (jack_on && wj.trace() > kZeroBudget) out.w_jack = extract_rank_one(wj).w;
  return out;
}

}  // namespace scs::beam

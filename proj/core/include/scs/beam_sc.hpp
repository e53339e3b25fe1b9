#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "scs/conic.hpp"
#include "scs/metrics.hpp"
#include "scs/scenario.hpp"

namespace scs::beam {

struct ScChannels {
  ComplexVec alice_bob, alice_eve, jack_bob, jack_eve;
};

struct Budgets {
  double alice = 0.0;
  double jack = 0.0;
};

// Matched-filter covariance at the given power: w w^H with w = sqrt(p) h/||h||.
Hermitian mrt_lift(const ComplexVec& h, double power);

// Secrecy rate of the rank-relaxed covariances; identical to the rank-one
// metric when the covariances are outer products.
double sc_rate_lifted(const Hermitian& w_alice, const Hermitian& w_jack,
                      const ScChannels& ch, const ResidLevels& resid,
                      const Noises& noise);

// Tight concave lower bound on sc_rate_lifted around an expansion point: the
// two concave logs are kept, the two convex logs are linearized there.
struct ScBound {
  double a = 0.0;  // bits; sum of the linearized logs at the expansion
  double b = 0.0;  // bits/W; Eve-side linearization slope
  double c = 0.0;  // bits/W; Bob-side interference linearization slope
  conic::LogTerm bob_log, eve_log;   // over blocks [alice, jack]
  Hermitian lin_alice, lin_jack;
  double constant = 0.0;

  double value(const Hermitian& w_alice, const Hermitian& w_jack) const;
};

ScBound build_sc_bound(const Hermitian& wa_exp, const Hermitian& wj_exp,
                       const ScChannels& ch, const ResidLevels& resid,
                       const Noises& noise);

// Principal component of a PSD covariance. ratio = lambda_max / trace; the
// global phase makes the first non-negligible entry real nonnegative.
// Throws std::invalid_argument when trace(w) == 0.
struct RankOne {
  ComplexVec w;
  double ratio = 1.0;
};
RankOne extract_rank_one(const Hermitian& w);

struct BeamLog {
  int sca_iters = 0;
  int penalty_rounds = 0;
  double final_penalty = 0.0;
  double ratio_alice = 1.0, ratio_jack = 1.0;
  bool rank_one_ok = true;
  bool solver_ok = true;
  long conic_solves = 0;
  std::vector<double> bound_trace;  // optimal lower-bound value per iteration
  std::vector<double> rate_trace;   // true lifted rate per iteration
  std::vector<conic::IterRecord> solver_log;
};

struct ScSlotResult {
  ComplexVec w_alice, w_jack;     // extracted beamformers
  Hermitian cov_alice, cov_jack;  // relaxed covariances at exit
  BeamLog log;
};

// One communication slot: iterate the bound maximization with the rank-one
// penalty, shrinking the control factor geometrically until the principal
// eigenvalue carries at least cfg.rank_one_tol of the trace. warm seeds the
// expansion point (half-budget matched-filter lifts otherwise).
ScSlotResult solve_sc_slot(
    const ScChannels& ch, const ResidLevels& resid, const Noises& noise,
    const Budgets& budgets, const SolverConfig& cfg,
    const std::optional<std::pair<Hermitian, Hermitian>>& warm = {});

}  // namespace scs::beam

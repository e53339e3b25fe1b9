#pragma once

#include <string>
#include <vector>

#include "scs/types.hpp"

// Self-contained barrier-Newton solvers for the two convex subproblem shapes
// the pipeline generates:
//   (a) concave log-affine plus linear objective over Hermitian PSD blocks
//       with linear (trace budget) inequalities,
//   (b) linear objective over chained 2-D waypoints with norm-ball and linear
//       constraints.
// Dense factorizations throughout; block dims stay <= 8 and waypoint counts
// <= a few hundred. Deterministic: identical inputs give bit-identical logs.
namespace scs::conic {

enum class SolveStatus { optimal, max_iter, infeasible_start };

struct IterRecord {
  int stage = 0;        // barrier continuation stage
  int iter = 0;         // Newton iteration within the stage
  double barrier_t = 0; // barrier parameter t
  double objective = 0; // problem objective at the iterate
  double merit = 0;     // full barrier merit value
  double step = 0;      // accepted line-search step
};

struct SolveInfo {
  double objective = 0.0;
  double stat_residual = 0.0;  // scaled stationarity norm
  double feas_residual = 0.0;  // max constraint violation (0 while interior)
  double comp_residual = 0.0;  // complementarity gap bound
  int newton_iters = 0;
  SolveStatus status = SolveStatus::optimal;
  bool monotone_path = true;   // objective nondecreasing across stages
  std::string message;
  std::vector<IterRecord> log;
};

struct SolveOptions {
  double tol = 1e-6;
  double mu = 10.0;           // barrier continuation multiplier
  int max_newton_iters = 400;
  bool capture_log = false;
};

// ---------------------------------------------------------------------------
// (a) PSD log program:
//   maximize sum_i w_i * ln(sum_blk <A_i,blk, X_blk> + b_i)
//            + sum_blk <L_blk, X_blk> + constant
//   s.t.     sum_blk <G_k,blk, X_blk> <= g_k,   X_blk >= 0.
// Weights w_i must be nonnegative and every log argument must be positive at
// the supplied strictly feasible start.

struct LogTerm {
  double weight = 1.0;
  std::vector<Hermitian> mats;  // one per block; empty dim = zero contribution
  double offset = 0.0;
};

struct LinearIneq {
  std::vector<Hermitian> mats;
  double bound = 0.0;
};

struct PsdLogProgram {
  std::vector<int> block_dims;
  std::vector<LogTerm> log_terms;
  std::vector<Hermitian> linear;  // L per block (may be empty for zero)
  double constant = 0.0;
  std::vector<LinearIneq> ineqs;
};

struct PsdSolution {
  std::vector<Hermitian> blocks;
  SolveInfo info;
};

PsdSolution solve_psd_log(const PsdLogProgram& p,
                          const std::vector<Hermitian>& start,
                          const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// (b) Waypoint program over free 2-D points x_0..x_{P-1}:
//   maximize sum_p <objective_p, x_p>
//   s.t.     || x_p - x_q + shift || <= radius   (q < 0: || x_p + shift || <= radius)
//            <normal, x_p> <= bound.

struct BallConstraint {
  int p = 0;
  int q = -1;
  Vec2 shift = Vec2::Zero();
  double radius = 0.0;
};

struct HalfPlane {
  int p = 0;
  Vec2 normal = Vec2::Zero();
  double bound = 0.0;
};

struct WaypointProgram {
  int num_points = 0;
  std::vector<Vec2> objective;
  std::vector<BallConstraint> balls;
  std::vector<HalfPlane> halfplanes;
};

struct WaypointSolution {
  std::vector<Vec2> points;
  SolveInfo info;
};

WaypointSolution solve_waypoints(const WaypointProgram& p,
                                 const std::vector<Vec2>& start,
                                 const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Independent feasibility checks. These re-evaluate every constraint with
// plain arithmetic and share no code with the solver iterations.

struct FeasCheck {
  bool ok = true;
  double max_violation = 0.0;
  std::vector<std::string> notes;
};

FeasCheck check_feasible(const PsdLogProgram& p,
                         const std::vector<Hermitian>& blocks, double tol);
FeasCheck check_feasible(const WaypointProgram& p, const std::vector<Vec2>& pts,
                         double tol);

}  // namespace scs::conic

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "scs/metrics.hpp"
#include "scs/scenario.hpp"

namespace scs::traj {

// Horizontal path of one UAV on the slot grid: pts[0] is the initial anchor,
// pts[n] the position held during slot n, pts[N] the final anchor.
struct Trajectory {
  double altitude = 0.0;
  std::vector<Vec2> pts;

  int slots() const { return int(pts.size()) - 1; }
  const Vec2& at(int slot) const { return pts[size_t(slot)]; }
  bool empty() const { return pts.empty(); }
};

Trajectory straight_line(const Vec2& start, const Vec2& end, int slots,
                         double altitude);

struct PathCheck {
  bool endpoints_ok = true;
  bool displacement_ok = true;
  double max_step = 0.0;
  bool ok() const { return endpoints_ok && displacement_ok; }
};
PathCheck check_path(const Trajectory& t, const Vec2& start, const Vec2& end,
                     double max_step, double tol = 1e-6);

// Smallest 3-D separation over slots (anchor points included).
double min_separation(const Trajectory& a, const Trajectory& b);

// Everything held fixed while one UAV position is optimized in one slot.
struct SlotFixed {
  Hermitian w_alice, w_jack;
  Vec2 bob = Vec2::Zero(), eve = Vec2::Zero();
  double alt_alice = 0.0, alt_jack = 0.0;
  double spacing_ratio = 0.5;
  double pathloss_ref = 1.0;
  ResidLevels resid;
  Noises noise;
};

// Secrecy rate as a function of one UAV's horizontal position with beams and
// the other UAV held fixed. Exact rewrites of the covariance-form rate.
double rate_at_alice_pos(const Vec2& u_alice, const Vec2& u_jack,
                         const SlotFixed& f);
double rate_at_jack_pos(const Vec2& u_jack, const Vec2& u_alice,
                        const SlotFixed& f);

// First-order model at an expansion point: rate(u) ~ alpha + rho.(u - u0).
// The zeta factors are the four log arguments at u0 (all strictly positive).
struct SlotLinearization {
  double alpha = 0.0;
  Vec2 rho = Vec2::Zero();
  double zeta_num_bob = 0.0, zeta_den_bob = 0.0;
  double zeta_num_eve = 0.0, zeta_den_eve = 0.0;
};
SlotLinearization linearize_alice(const Vec2& u_alice, const Vec2& u_jack,
                                  const SlotFixed& f);
SlotLinearization linearize_jack(const Vec2& u_jack, const Vec2& u_alice,
                                 const SlotFixed& f);

struct TrajUpdateResult {
  Trajectory path;
  int iterations = 0;
  double mean_rate = 0.0;            // unclamped mean over slots at `path`
  double grad_check_max_err = -1.0;  // set when cfg.check_gradients
  long conic_solves = 0;
  bool solver_ok = true;
  std::vector<double> radius_trace;  // trust radius per iteration
};

// Trust-region update of one UAV's path with the other path and all beams
// frozen. Iterates always step to the subproblem optimum; the returned path
// is the best true-rate iterate seen, so the mean rate never drops below the
// input's. beams[n-1] belongs to slot n.
TrajUpdateResult solve_alice_trajectory(const Scenario& s,
                                        const Trajectory& alice,
                                        const Trajectory& jack,
                                        std::span<const SlotBeams> beams);
TrajUpdateResult solve_jack_trajectory(const Scenario& s,
                                       const Trajectory& jack,
                                       const Trajectory& alice,
                                       std::span<const SlotBeams> beams);

// Benchmark path: full-speed transit to the hover point (Bob for Alice, Eve
// for Jack), hover for every spare slot, full-speed transit to the terminal
// point. Falls back to the feasible path of closest approach when the hover
// point cannot be reached in time. Inter-UAV separation is not enforced.
// Throws std::runtime_error when start->end itself is out of reach.
Trajectory fhf_trajectory(const Scenario& s, bool for_alice);

}  // namespace scs::traj

#include "scs/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scs/conic.hpp"
#include "scs/geometry.hpp"

namespace scs::traj {

namespace {
const double kLog2e = 1.0 / std::log(2.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

Trajectory straight_line(const Vec2& start, const Vec2& end, int slots,
                         double altitude) {
  Trajectory t;
  t.altitude = altitude;
  t.pts.reserve(slots + 1);
  for (int n = 0; n <= slots; ++n) {
    t.pts.push_back(start + (end - start) * (double(n) / double(slots)));
  }
  return t;
}

PathCheck check_path(const Trajectory& t, const Vec2& start, const Vec2& end,
                     double max_step, double tol) {
  PathCheck c;
  c.endpoints_ok = (t.pts.front() - start).norm() <= tol &&
                   (t.pts.back() - end).norm() <= tol;
  for (size_t n = 1; n < t.pts.size(); ++n) {
    c.max_step = std::max(c.max_step, (t.pts[n] - t.pts[n - 1]).norm());
  }
  c.displacement_ok = c.max_step <= max_step + tol;
  return c;
}

double min_separation(const Trajectory& a, const Trajectory& b) {
  const double dh2 = (a.altitude - b.altitude) * (a.altitude - b.altitude);
  double best = std::numeric_limits<double>::infinity();
  for (size_t n = 0; n < a.pts.size() && n < b.pts.size(); ++n) {
    best = std::min(best, (a.pts[n] - b.pts[n]).squaredNorm() + dh2);
  }
  return std::sqrt(best);
}

namespace {

double quad_eta(const Hermitian& w, const Vec2& u, double alt, const Vec2& node,
                double spacing) {
  return w.empty() ? 0.0 : geom::eta(w, u, alt, node, spacing);
}

// Gradient of eta with respect to the UAV's horizontal position.
Vec2 eta_gradient(const Hermitian& w, const Vec2& u, double alt,
                  const Vec2& node, double spacing) {
  if (w.empty()) return Vec2::Zero();
  const Eigen::Index m = w.dim();
  const double d = geom::slant_distance(u, alt, node);
  const double phase_step = kTwoPi * spacing * alt / d;
  double coeff = 0.0;
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = x + 1; y < m; ++y) {
      const Complex e = w(x, y);
      coeff += std::abs(e) * double(y - x) *
               std::sin(std::arg(e) + phase_step * double(y - x));
    }
  }
  return (2.0 * kTwoPi * spacing * alt * coeff / (d * d * d)) * (u - node);
}

struct AliceNodeTerms {
  double num, den;      // zeta pair
  double interf;        // jamming-plus-noise density, distance-normalized
  Vec2 gamma;           // steering-phase gradient of the signal term
};

AliceNodeTerms alice_terms(const Vec2& u_alice, const Vec2& u_jack,
                           const Vec2& node, double resid_jam, double noise,
                           const SlotFixed& f) {
  AliceNodeTerms t;
  const double dj2 = (u_jack - node).squaredNorm() + f.alt_jack * f.alt_jack;
  t.interf = resid_jam *
                 quad_eta(f.w_jack, u_jack, f.alt_jack, node, f.spacing_ratio) /
                 dj2 +
             noise / f.pathloss_ref;
  const double da2 = (u_alice - node).squaredNorm() + f.alt_alice * f.alt_alice;
  t.den = t.interf * da2;
  t.num = quad_eta(f.w_alice, u_alice, f.alt_alice, node, f.spacing_ratio) + t.den;
  t.gamma = eta_gradient(f.w_alice, u_alice, f.alt_alice, node, f.spacing_ratio);
  return t;
}

struct JackNodeTerms {
  double num, den;   // zeta pair
  double sig_norm;   // Alice signal density at the node (fixed)
  Vec2 grad_den;     // gradient of the denominator zeta
};

JackNodeTerms jack_terms(const Vec2& u_jack, const Vec2& u_alice,
                         const Vec2& node, double resid_jam, double noise,
                         const SlotFixed& f) {
  JackNodeTerms t;
  const double da2 = (u_alice - node).squaredNorm() + f.alt_alice * f.alt_alice;
  t.sig_norm =
      quad_eta(f.w_alice, u_alice, f.alt_alice, node, f.spacing_ratio) / da2;
  const double dj2 = (u_jack - node).squaredNorm() + f.alt_jack * f.alt_jack;
  const double sigma_beta = noise / f.pathloss_ref;
  t.den = resid_jam * quad_eta(f.w_jack, u_jack, f.alt_jack, node, f.spacing_ratio) +
          sigma_beta * dj2;
  t.num = t.sig_norm * dj2 + t.den;
  t.grad_den = resid_jam * eta_gradient(f.w_jack, u_jack, f.alt_jack, node,
                                        f.spacing_ratio) +
               2.0 * sigma_beta * (u_jack - node);
  return t;
}

}  // namespace

double rate_at_alice_pos(const Vec2& u_alice, const Vec2& u_jack,
                         const SlotFixed& f) {
  const auto b = alice_terms(u_alice, u_jack, f.bob, f.resid.jam_bob, f.noise.bob, f);
  const auto e = alice_terms(u_alice, u_jack, f.eve, f.resid.jam_eve, f.noise.eve, f);
  return std::log2(b.num) - std::log2(b.den) - std::log2(e.num) + std::log2(e.den);
}

double rate_at_jack_pos(const Vec2& u_jack, const Vec2& u_alice,
                        const SlotFixed& f) {
  const auto b = jack_terms(u_jack, u_alice, f.bob, f.resid.jam_bob, f.noise.bob, f);
  const auto e = jack_terms(u_jack, u_alice, f.eve, f.resid.jam_eve, f.noise.eve, f);
  return std::log2(b.num) - std::log2(b.den) - std::log2(e.num) + std::log2(e.den);
}

SlotLinearization linearize_alice(const Vec2& u_alice, const Vec2& u_jack,
                                  const SlotFixed& f) {
  const auto b = alice_terms(u_alice, u_jack, f.bob, f.resid.jam_bob, f.noise.bob, f);
  const auto e = alice_terms(u_alice, u_jack, f.eve, f.resid.jam_eve, f.noise.eve, f);
  SlotLinearization lin;
  lin.alpha = std::log2(b.num) - std::log2(b.den) - std::log2(e.num) +
              std::log2(e.den);
  lin.rho = kLog2e * (b.gamma / b.num - e.gamma / e.num +
                      2.0 * b.interf * (1.0 / b.num - 1.0 / b.den) * (u_alice - f.bob) -
                      2.0 * e.interf * (1.0 / e.num - 1.0 / e.den) * (u_alice - f.eve));
  lin.zeta_num_bob = b.num;
  lin.zeta_den_bob = b.den;
  lin.zeta_num_eve = e.num;
  lin.zeta_den_eve = e.den;
  return lin;
}

SlotLinearization linearize_jack(const Vec2& u_jack, const Vec2& u_alice,
                                 const SlotFixed& f) {
  const auto b = jack_terms(u_jack, u_alice, f.bob, f.resid.jam_bob, f.noise.bob, f);
  const auto e = jack_terms(u_jack, u_alice, f.eve, f.resid.jam_eve, f.noise.eve, f);
  SlotLinearization lin;
  lin.alpha = std::log2(b.num) - std::log2(b.den) - std::log2(e.num) +
              std::log2(e.den);
  lin.rho = kLog2e * ((1.0 / b.num - 1.0 / b.den) * b.grad_den +
                      2.0 * b.sig_norm * (u_jack - f.bob) / b.num -
                      (1.0 / e.num - 1.0 / e.den) * e.grad_den -
                      2.0 * e.sig_norm * (u_jack - f.eve) / e.num);
  lin.zeta_num_bob = b.num;
  lin.zeta_den_bob = b.den;
  lin.zeta_num_eve = e.num;
  lin.zeta_den_eve = e.den;
  return lin;
}

namespace {

SlotFixed slot_fixed(const Scenario& s, const SlotBeams& beams) {
  SlotFixed f;
  f.w_alice = beams.alice;
  f.w_jack = beams.jack;
  f.bob = s.bob_pos;
  f.eve = s.eve_pos;
  f.alt_alice = s.alt_alice;
  f.alt_jack = s.alt_jack;
  f.spacing_ratio = s.spacing_ratio;
  f.pathloss_ref = s.pathloss_ref;
  f.resid = {s.resid_jam_bob, s.resid_jam_eve, s.resid_sense_bob, s.resid_sense_eve};
  f.noise = {s.noise_bob, s.noise_eve};
  return f;
}

struct TrustRegionSide {
  bool alice;        // which UAV moves
  double shrink;
  double tol;
};

TrajUpdateResult run_trust_region(const Scenario& s, const Trajectory& moving,
                                  const Trajectory& other,
                                  std::span<const SlotBeams> beams,
                                  const TrustRegionSide& side) {
  const int n_slots = moving.slots();
  const double d_max = s.v_max * s.slot_len;
  const Vec2 start_pt = moving.pts.front();
  const Vec2 end_pt = moving.pts.back();
  const double dh2 = (s.alt_alice - s.alt_jack) * (s.alt_alice - s.alt_jack);
  const double sep_rhs = s.d_min * s.d_min - dh2;

  auto slot_rate = [&](int n, const Vec2& u) {
    const SlotFixed f = slot_fixed(s, beams[size_t(n - 1)]);
    return side.alice ? rate_at_alice_pos(u, other.at(n), f)
                      : rate_at_jack_pos(u, other.at(n), f);
  };
  auto slot_lin = [&](int n, const Vec2& u) {
    const SlotFixed f = slot_fixed(s, beams[size_t(n - 1)]);
    return side.alice ? linearize_alice(u, other.at(n), f)
                      : linearize_jack(u, other.at(n), f);
  };
  auto mean_rate = [&](const Trajectory& t) {
    double sum = 0.0;
    for (int n = 1; n <= n_slots; ++n) sum += slot_rate(n, t.at(n));
    return sum / double(n_slots);
  };

  TrajUpdateResult res;
  res.path = moving;
  res.mean_rate = mean_rate(moving);
  Trajectory cur = moving;
  double best_rate = res.mean_rate;
  double psi = s.solver.trust_radius_init;

  const int n_free = n_slots - 1;  // slots 1..N-1; slot N sits on the anchor
  if (n_free <= 0) return res;

  conic::SolveOptions opts;
  opts.tol = s.solver.kkt_tol;
  opts.max_newton_iters = s.solver.max_newton_iters;

  for (int it = 0; it < s.solver.max_tr_iters; ++it) {
    if (psi < s.solver.trust_floor) break;
    res.radius_trace.push_back(psi);

    std::vector<SlotLinearization> lins(size_t(n_slots) + 1);
    double mean_alpha = 0.0;
    for (int n = 1; n <= n_slots; ++n) {
      lins[size_t(n)] = slot_lin(n, cur.at(n));
      mean_alpha += lins[size_t(n)].alpha;
      if (s.solver.check_gradients) {
        const double h = 1e-3;
        Vec2 fd;
        for (int axis = 0; axis < 2; ++axis) {
          Vec2 up = cur.at(n), dn = cur.at(n);
          up(axis) += h;
          dn(axis) -= h;
          fd(axis) = (slot_rate(n, up) - slot_rate(n, dn)) / (2.0 * h);
        }
        const double err = (lins[size_t(n)].rho - fd).norm() /
                           std::max(fd.norm(), 1e-12);
        res.grad_check_max_err = std::max(res.grad_check_max_err, err);
      }
    }
    mean_alpha /= double(n_slots);

    conic::WaypointProgram prog;
    prog.num_points = n_free;
    prog.objective.resize(n_free);
    for (int i = 0; i < n_free; ++i) {
      prog.objective[size_t(i)] = lins[size_t(i) + 1].rho / double(n_slots);
    }
    // Displacement chain, anchored at both ends.
    prog.balls.push_back({0, -1, -start_pt, d_max});
    for (int i = 1; i < n_free; ++i) prog.balls.push_back({i, i - 1, Vec2::Zero(), d_max});
    prog.balls.push_back({n_free - 1, -1, -end_pt, d_max});
    // Trust region around the current iterate.
    for (int i = 0; i < n_free; ++i) prog.balls.push_back({i, -1, -cur.at(i + 1), psi});
    // Linearized separation floor (skipped when vacuous).
    for (int i = 0; i < n_free; ++i) {
      const int n = i + 1;
      const Vec2 diff = side.alice ? (cur.at(n) - other.at(n))
                                   : (other.at(n) - cur.at(n));
      if (diff.squaredNorm() < 1e-18) {
        continue;  // gradient degenerate; constraint holds through altitude gap
      }
      if (side.alice) {
        // 2 diff.u >= sep_rhs - ||diff||^2 + 2 diff.u_cur
        prog.halfplanes.push_back(
            {i, -2.0 * diff,
             -(sep_rhs - diff.squaredNorm() + 2.0 * diff.dot(cur.at(n)))});
      } else {
        // 2 diff.u <= ||diff||^2 + 2 diff.u_cur - sep_rhs + 2 diff.diff... the
        // moving point enters with the opposite sign of the fixed one.
        prog.halfplanes.push_back(
            {i, 2.0 * diff,
             diff.squaredNorm() + 2.0 * diff.dot(cur.at(n)) - sep_rhs});
      }
    }

    std::vector<Vec2> start(cur.pts.begin() + 1, cur.pts.begin() + 1 + n_free);
    const conic::WaypointSolution sol = conic::solve_waypoints(prog, start, opts);
    ++res.conic_solves;
    res.solver_ok = res.solver_ok && sol.info.status != conic::SolveStatus::infeasible_start;
    if (sol.info.status == conic::SolveStatus::infeasible_start) break;

    double lin_new = 0.0;
    for (int i = 0; i < n_free; ++i) {
      const auto& l = lins[size_t(i) + 1];
      lin_new += l.alpha + l.rho.dot(sol.points[size_t(i)] - cur.at(i + 1));
    }
    lin_new += lins[size_t(n_slots)].alpha;  // fixed final slot
    lin_new /= double(n_slots);

    for (int i = 0; i < n_free; ++i) cur.pts[size_t(i) + 1] = sol.points[size_t(i)];
    ++res.iterations;
    psi *= side.shrink;

    const double rate_now = mean_rate(cur);
    if (rate_now > best_rate) {
      best_rate = rate_now;
      res.path = cur;
      res.mean_rate = rate_now;
    }
    if (lin_new - mean_alpha <= side.tol) break;
  }
  return res;
}

}  // namespace

TrajUpdateResult solve_alice_trajectory(const Scenario& s,
                                        const Trajectory& alice,
                                        const Trajectory& jack,
                                        std::span<const SlotBeams> beams) {
  return run_trust_region(s, alice, jack, beams,
                          {true, s.solver.shrink_alice, s.solver.alice_tol});
}

TrajUpdateResult solve_jack_trajectory(const Scenario& s,
                                       const Trajectory& jack,
                                       const Trajectory& alice,
                                       std::span<const SlotBeams> beams) {
  return run_trust_region(s, jack, alice, beams,
                          {false, s.solver.shrink_jack, s.solver.jack_tol});
}

namespace {

// Closest point to p in the intersection of ||x-s|| <= r1 and ||x-f|| <= r2.
Vec2 closest_in_lens(const Vec2& s, const Vec2& f, double r1, double r2,
                     const Vec2& p) {
  const bool in1 = (p - s).norm() <= r1;
  const bool in2 = (p - f).norm() <= r2;
  if (in1 && in2) return p;

  Vec2 best = Vec2::Zero();
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec2& x, bool valid) {
    if (!valid) return;
    const double d = (x - p).norm();
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  };

  if ((p - s).norm() > 0.0) {
    const Vec2 c1 = s + (p - s) * std::min(1.0, r1 / (p - s).norm());
    consider(c1, (c1 - f).norm() <= r2 + 1e-9);
  } else {
    consider(s, (s - f).norm() <= r2 + 1e-9);
  }
  if ((p - f).norm() > 0.0) {
    const Vec2 c2 = f + (p - f) * std::min(1.0, r2 / (p - f).norm());
    consider(c2, (c2 - s).norm() <= r1 + 1e-9);
  } else {
    consider(f, (f - s).norm() <= r1 + 1e-9);
  }

  const double dd = (f - s).norm();
  if (dd > 0.0) {
    const double a = (r1 * r1 - r2 * r2 + dd * dd) / (2.0 * dd);
    const double h2 = r1 * r1 - a * a;
    if (h2 >= 0.0) {
      const Vec2 dir = (f - s) / dd;
      const Vec2 base = s + a * dir;
      const Vec2 perp(-dir.y(), dir.x());
      const double h = std::sqrt(h2);
      consider(base + h * perp, true);
      consider(base - h * perp, true);
    }
  }
  return best;
}

}  // namespace

Trajectory fhf_trajectory(const Scenario& s, bool for_alice) {
  const MissionGrid grid = mission_grid(s);
  const int n = grid.num_slots;
  const double d_max = grid.max_step;
  const Vec2 start = for_alice ? s.alice_start : s.jack_start;
  const Vec2 end = for_alice ? s.alice_end : s.jack_end;
  const Vec2 hover = for_alice ? s.bob_pos : s.eve_pos;
  const double altitude = for_alice ? s.alt_alice : s.alt_jack;

  if ((end - start).norm() > double(n) * d_max * (1.0 + 1e-12)) {
    throw std::runtime_error("fhf_trajectory: terminal point unreachable in time");
  }

  Trajectory t;
  t.altitude = altitude;
  t.pts.assign(size_t(n) + 1, Vec2::Zero());

  const double dist_sh = (hover - start).norm();
  const double dist_he = (end - hover).norm();
  const int n1 = int(std::ceil(dist_sh / d_max - 1e-12));
  const int n2 = int(std::ceil(dist_he / d_max - 1e-12));

  if (n1 + n2 <= n) {
    const Vec2 dir_out = dist_sh > 0.0 ? Vec2((hover - start) / dist_sh) : Vec2::Zero();
    const Vec2 dir_back = dist_he > 0.0 ? Vec2((hover - end) / dist_he) : Vec2::Zero();
    for (int k = 0; k <= n; ++k) {
      if (k <= n1) {
        t.pts[size_t(k)] = start + dir_out * std::min(double(k) * d_max, dist_sh);
      } else if (k < n - n2) {
        t.pts[size_t(k)] = hover;
      } else {
        t.pts[size_t(k)] =
            end + dir_back * std::min(double(n - k) * d_max, dist_he);
      }
    }
    return t;
  }

  // Hover point out of reach: fly start->end at full speed through the
  // reachable point of closest approach.
  int best_k = 0;
  Vec2 best_pt = start;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const Vec2 x = closest_in_lens(start, end, double(k) * d_max,
                                   double(n - k) * d_max, hover);
    const double d = (x - hover).norm();
    if (d < best_d - 1e-12) {
      best_d = d;
      best_k = k;
      best_pt = x;
    }
  }
  for (int k = 0; k <= n; ++k) {
    if (k <= best_k) {
      const double frac = best_k == 0 ? 1.0 : double(k) / double(best_k);
      t.pts[size_t(k)] = start + (best_pt - start) * frac;
    } else {
      const double frac = double(k - best_k) / double(n - best_k);
      t.pts[size_t(k)] = best_pt + (end - best_pt) * frac;
    }
  }
  return t;
}

}  // namespace scs::traj

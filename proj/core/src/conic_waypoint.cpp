#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "scs/conic.hpp"

namespace scs::conic {

namespace {

constexpr double kDecrementTol = 1e-12;
constexpr double kTMax = 1e16;

// Tiny radius inflation so starts sitting exactly on a ball boundary remain
// usable; keeps the worst-case overshoot well inside the feasibility
// tolerance the callers verify against.
double inflate(double radius) { return 1e-9 * (1.0 + radius * radius); }
double inflate_half(double bound) { return 1e-9 * (1.0 + std::abs(bound)); }

struct PointState {
  bool interior = false;
  double f = 0.0;
  double merit = 0.0;
};

Vec2 ball_gap(const WaypointProgram& p, const BallConstraint& c,
              const Eigen::VectorXd& x) {
  Vec2 d = Vec2(x(2 * c.p), x(2 * c.p + 1)) + c.shift;
  if (c.q >= 0) d -= Vec2(x(2 * c.q), x(2 * c.q + 1));
  (void)p;
  return d;
}

PointState evaluate(const WaypointProgram& p, const Eigen::VectorXd& obj,
                    const Eigen::VectorXd& x, double t) {
  PointState st;
  double barrier = 0.0;
  for (const auto& c : p.balls) {
    const Vec2 d = ball_gap(p, c, x);
    const double slack = c.radius * c.radius + inflate(c.radius) - d.squaredNorm();
    if (slack <= 0.0) return st;
    barrier += std::log(slack);
  }
  for (const auto& hp : p.halfplanes) {
    const double slack = hp.bound + inflate_half(hp.bound) -
                         hp.normal.dot(Vec2(x(2 * hp.p), x(2 * hp.p + 1)));
    if (slack <= 0.0) return st;
    barrier += std::log(slack);
  }
  st.interior = true;
  st.f = obj.dot(x);
  st.merit = t * st.f + barrier;
  return st;
}

void assemble(const WaypointProgram& p, const Eigen::VectorXd& obj,
              const Eigen::VectorXd& x, double t, Eigen::VectorXd& grad,
              Eigen::MatrixXd& hneg) {
  grad = t * obj;
  hneg.setZero();
  for (const auto& c : p.balls) {
    const Vec2 d = ball_gap(p, c, x);
    const double slack = c.radius * c.radius + inflate(c.radius) - d.squaredNorm();
    const int ip = 2 * c.p;
    grad.segment<2>(ip) -= (2.0 / slack) * d;
    Eigen::VectorXd gs = Eigen::VectorXd::Zero(x.size());
    gs.segment<2>(ip) = 2.0 * d;
    hneg(ip, ip) += 2.0 / slack;
    hneg(ip + 1, ip + 1) += 2.0 / slack;
    if (c.q >= 0) {
      const int iq = 2 * c.q;
      grad.segment<2>(iq) += (2.0 / slack) * d;
      gs.segment<2>(iq) = -2.0 * d;
      hneg(iq, iq) += 2.0 / slack;
      hneg(iq + 1, iq + 1) += 2.0 / slack;
      hneg(ip, iq) -= 2.0 / slack;
      hneg(iq, ip) -= 2.0 / slack;
      hneg(ip + 1, iq + 1) -= 2.0 / slack;
      hneg(iq + 1, ip + 1) -= 2.0 / slack;
    }
    hneg += (gs * gs.transpose()) / (slack * slack);
  }
  for (const auto& hp : p.halfplanes) {
    const int ip = 2 * hp.p;
    const double slack = hp.bound + inflate_half(hp.bound) -
                         hp.normal.dot(Vec2(x(ip), x(ip + 1)));
    grad.segment<2>(ip) -= hp.normal / slack;
    hneg.block<2, 2>(ip, ip) +=
        (hp.normal * hp.normal.transpose()) / (slack * slack);
  }
}

}  // namespace

WaypointSolution solve_waypoints(const WaypointProgram& p,
                                 const std::vector<Vec2>& start,
                                 const SolveOptions& opts) {
  WaypointSolution sol;
  sol.points = start;
  const int n = 2 * p.num_points;

  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < p.num_points && i < int(p.objective.size()); ++i) {
    obj.segment<2>(2 * i) = p.objective[i];
  }
  Eigen::VectorXd x(n);
  for (int i = 0; i < p.num_points; ++i) x.segment<2>(2 * i) = start[i];

  const double nu = std::max<size_t>(1, p.balls.size() + p.halfplanes.size());

  double t = 1.0;
  PointState cur = evaluate(p, obj, x, t);
  if (!cur.interior) {
    sol.info.status = SolveStatus::infeasible_start;
    sol.info.message = "start is not strictly feasible";
    return sol;
  }

  Eigen::VectorXd grad(n);
  Eigen::MatrixXd hneg(n, n);
  int total_newton = 0;
  int stage = 0;
  double prev_stage_f = -std::numeric_limits<double>::infinity();
  sol.info.status = SolveStatus::optimal;

  while (true) {
    ++stage;
    cur = evaluate(p, obj, x, t);  // the merit scale changes with t
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      if (total_newton >= opts.max_newton_iters) break;
      assemble(p, obj, x, t, grad, hneg);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hneg);
      double ridge = 0.0;
      while (ldlt.info() != Eigen::Success ||
             (ldlt.vectorD().array() <= 0.0).any()) {
        ridge = std::max(ridge * 10.0, 1e-12 * (1.0 + hneg.diagonal().maxCoeff()));
        ldlt.compute(hneg + ridge * Eigen::MatrixXd::Identity(n, n));
        if (ridge > 1e6) break;
      }
      const Eigen::VectorXd dx = ldlt.solve(grad);
      const double decrement = grad.dot(dx);
      ++total_newton;
      if (!(decrement > 2.0 * kDecrementTol)) break;

      double alpha = 1.0;
      PointState next;
      for (int ls = 0; ls < 80; ++ls) {
        next = evaluate(p, obj, x + alpha * dx, t);
        if (next.interior &&
            next.merit >= cur.merit + 0.25 * alpha * decrement -
                              1e-12 * (1.0 + std::abs(cur.merit))) {
          break;
        }
        next.interior = false;
        alpha *= 0.5;
      }
      if (!next.interior) break;
      x += alpha * dx;
      cur = next;
      if (opts.capture_log) {
        sol.info.log.push_back({stage, it, t, cur.f, cur.merit, alpha});
      }
    }

    if (cur.f < prev_stage_f - 1e-9 * (1.0 + std::abs(prev_stage_f))) {
      sol.info.monotone_path = false;
    }
    prev_stage_f = cur.f;

    if (nu / t <= opts.tol) break;
    if (total_newton >= opts.max_newton_iters) {
      sol.info.status = SolveStatus::max_iter;
      sol.info.message = "newton budget exhausted";
      break;
    }
    t = std::min(t * opts.mu, kTMax);
  }

  for (int i = 0; i < p.num_points; ++i) sol.points[i] = x.segment<2>(2 * i);
  sol.info.objective = cur.f;
  sol.info.comp_residual = nu / t;
  assemble(p, obj, x, t, grad, hneg);
  sol.info.stat_residual = grad.lpNorm<Eigen::Infinity>() / t /
                           (1.0 + obj.lpNorm<Eigen::Infinity>());
  sol.info.newton_iters = total_newton;
  return sol;
}

FeasCheck check_feasible(const WaypointProgram& p, const std::vector<Vec2>& pts,
                         double tol) {
  FeasCheck fc;
  auto flag = [&](double viol, const std::string& note) {
    fc.max_violation = std::max(fc.max_violation, viol);
    if (viol > tol) {
      fc.ok = false;
      fc.notes.push_back(note);
    }
  };
  for (size_t i = 0; i < p.balls.size(); ++i) {
    const auto& c = p.balls[i];
    Vec2 d = pts[c.p] + c.shift;
    if (c.q >= 0) d -= pts[c.q];
    flag(d.norm() - c.radius, "ball " + std::to_string(i) + " violated");
  }
  for (size_t i = 0; i < p.halfplanes.size(); ++i) {
    const auto& hp = p.halfplanes[i];
    const double scale = 1.0 + std::abs(hp.bound);
    flag((hp.normal.dot(pts[hp.p]) - hp.bound) / scale,
         "halfplane " + std::to_string(i) + " violated");
  }
  return fc;
}

}  // namespace scs::conic

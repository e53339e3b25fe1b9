#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "scs/conic.hpp"

namespace scs::conic {

namespace {

constexpr double kDecrementTol = 1e-10;  // Newton decrement^2 / 2
constexpr double kTMax = 1e16;
constexpr double kLogFloor = 1e-300;

struct FlatLog {
  double w;
  Eigen::VectorXd a;
  double b;
};

struct FlatIneq {
  Eigen::VectorXd g;
  double h;
};

// Program data mapped to the stacked real svec coordinates of all blocks.
struct FlatProgram {
  int n = 0;
  std::vector<int> dims;
  std::vector<int> offs;
  std::vector<FlatLog> logs;
  Eigen::VectorXd lin;
  std::vector<FlatIneq> ineqs;
  double constant = 0.0;
};

FlatProgram flatten(const PsdLogProgram& p) {
  FlatProgram f;
  f.dims = p.block_dims;
  f.offs.resize(p.block_dims.size());
  int n = 0;
  for (size_t b = 0; b < p.block_dims.size(); ++b) {
    f.offs[b] = n;
    n += int(svec_size(p.block_dims[b]));
  }
  f.n = n;
  f.constant = p.constant;
  auto stack = [&](const std::vector<Hermitian>& mats) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (size_t b = 0; b < mats.size() && b < f.dims.size(); ++b) {
      if (mats[b].empty()) continue;
      v.segment(f.offs[b], svec_size(f.dims[b])) = svec(mats[b]);
    }
    return v;
  };
  for (const auto& t : p.log_terms) {
    f.logs.push_back({t.weight, stack(t.mats), t.offset});
  }
  f.lin = stack(p.linear);
  for (const auto& q : p.ineqs) f.ineqs.push_back({stack(q.mats), q.bound});
  return f;
}

// Hessian of -logdet in svec coordinates: column p is svec(Y E_p Y) for the
// svec basis matrix E_p, with Y the block inverse. Positive semidefinite.
Eigen::MatrixXd logdet_curvature(const ComplexMat& y) {
  const Eigen::Index d = y.rows();
  Eigen::MatrixXd h(d * d, d * d);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Eigen::Index p = 0;
  auto put = [&](const ComplexMat& mp) { h.col(p++) = svec(Hermitian::project(mp)); };
  for (Eigen::Index i = 0; i < d; ++i) {
    put(y.col(i) * y.col(i).adjoint());
  }
  for (Eigen::Index cy = 1; cy < d; ++cy) {
    for (Eigen::Index cx = 0; cx < cy; ++cx) {
      const ComplexMat outer_xy = y.col(cx) * y.col(cy).adjoint();
      const ComplexMat outer_yx = y.col(cy) * y.col(cx).adjoint();
      put(inv_rt2 * (outer_xy + outer_yx));
      put(Complex(0.0, inv_rt2) * (outer_xy - outer_yx));
    }
  }
  return h;
}

struct PointState {
  bool interior = false;
  int bad_log_term = -1;
  double f = 0.0;       // problem objective without the constant
  double merit = 0.0;   // t*f + barriers
};

// Cheap interior test + merit evaluation used by the line search.
PointState evaluate(const FlatProgram& fp, const Eigen::VectorXd& x, double t) {
  PointState st;
  double barrier = 0.0;
  for (size_t b = 0; b < fp.dims.size(); ++b) {
    const int d = fp.dims[b];
    const Hermitian xb = smat(x.segment(fp.offs[b], svec_size(d)), d);
    Eigen::LLT<ComplexMat> llt(xb.mat());
    if (llt.info() != Eigen::Success) return st;
    double logdet = 0.0;
    for (int i = 0; i < d; ++i) {
      const double lii = llt.matrixL()(i, i).real();
      if (!(lii > 0.0)) return st;
      logdet += std::log(lii);
    }
    barrier += 2.0 * logdet;
  }
  double f = fp.lin.dot(x);
  for (size_t i = 0; i < fp.logs.size(); ++i) {
    const double s = fp.logs[i].a.dot(x) + fp.logs[i].b;
    if (s <= kLogFloor) {
      st.bad_log_term = int(i);
      return st;
    }
    f += fp.logs[i].w * std::log(s);
  }
  for (const auto& q : fp.ineqs) {
    const double slack = q.h - q.g.dot(x);
    if (slack <= 0.0) return st;
    barrier += std::log(slack);
  }
  st.interior = true;
  st.f = f;
  st.merit = t * f + barrier;
  return st;
}

// Gradient and negated Hessian of the barrier merit at an interior point.
void assemble(const FlatProgram& fp, const Eigen::VectorXd& x, double t,
              Eigen::VectorXd& grad, Eigen::MatrixXd& hneg) {
  grad = t * fp.lin;
  hneg.setZero();
  for (const auto& lg : fp.logs) {
    const double s = lg.a.dot(x) + lg.b;
    grad += (t * lg.w / s) * lg.a;
    hneg += (t * lg.w / (s * s)) * (lg.a * lg.a.transpose());
  }
  for (const auto& q : fp.ineqs) {
    const double slack = q.h - q.g.dot(x);
    grad -= q.g / slack;
    hneg += (q.g * q.g.transpose()) / (slack * slack);
  }
  for (size_t b = 0; b < fp.dims.size(); ++b) {
    const int d = fp.dims[b];
    const int off = fp.offs[b];
    const Hermitian xb = smat(x.segment(off, svec_size(d)), d);
    Eigen::LLT<ComplexMat> llt(xb.mat());
    const ComplexMat y = llt.solve(ComplexMat::Identity(d, d));
    grad.segment(off, svec_size(d)) += svec(Hermitian::project(y));
    hneg.block(off, off, svec_size(d), svec_size(d)) += logdet_curvature(y);
  }
}

}  // namespace

PsdSolution solve_psd_log(const PsdLogProgram& p,
                          const std::vector<Hermitian>& start,
                          const SolveOptions& opts) {
  const FlatProgram fp = flatten(p);
  PsdSolution sol;
  sol.blocks = start;

  Eigen::VectorXd x(fp.n);
  for (size_t b = 0; b < fp.dims.size(); ++b) {
    x.segment(fp.offs[b], svec_size(fp.dims[b])) = svec(start[b]);
  }

  double nu = 0.0;
  for (int d : fp.dims) nu += d;
  nu += double(fp.ineqs.size());
  nu = std::max(nu, 1.0);

  double t = 1.0;
  PointState cur = evaluate(fp, x, t);
  if (!cur.interior) {
    sol.info.status = SolveStatus::infeasible_start;
    sol.info.message = cur.bad_log_term >= 0
                           ? "log term " + std::to_string(cur.bad_log_term) +
                                 " nonpositive at start"
                           : "start is not strictly feasible";
    return sol;
  }

  Eigen::VectorXd grad(fp.n);
  Eigen::MatrixXd hneg(fp.n, fp.n);
  int total_newton = 0;
  int stage = 0;
  double prev_stage_f = -std::numeric_limits<double>::infinity();
  sol.info.status = SolveStatus::optimal;

  while (true) {
    ++stage;
    cur = evaluate(fp, x, t);  // the merit scale changes with t
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      if (total_newton >= opts.max_newton_iters) break;
      assemble(fp, x, t, grad, hneg);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hneg);
      double ridge = 0.0;
      while (ldlt.info() != Eigen::Success ||
             (ldlt.vectorD().array() <= 0.0).any()) {
        ridge = std::max(ridge * 10.0, 1e-12 * (1.0 + hneg.diagonal().maxCoeff()));
        ldlt.compute(hneg + ridge * Eigen::MatrixXd::Identity(fp.n, fp.n));
        if (ridge > 1e6) break;
      }
      const Eigen::VectorXd dx = ldlt.solve(grad);
      const double decrement = grad.dot(dx);
      ++total_newton;
      if (!(decrement > 2.0 * kDecrementTol)) break;

      double alpha = 1.0;
      PointState next;
      for (int ls = 0; ls < 80; ++ls) {
        next = evaluate(fp, x + alpha * dx, t);
        if (next.interior &&
            next.merit >= cur.merit + 0.25 * alpha * decrement -
                              1e-12 * (1.0 + std::abs(cur.merit))) {
          break;
        }
        next.interior = false;
        alpha *= 0.5;
      }
      if (!next.interior) break;  // no acceptable step at this centering
      x += alpha * dx;
      cur = next;
      if (opts.capture_log) {
        sol.info.log.push_back({stage, it, t, cur.f + fp.constant, cur.merit, alpha});
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

  for (size_t b = 0; b < fp.dims.size(); ++b) {
    sol.blocks[b] = smat(x.segment(fp.offs[b], svec_size(fp.dims[b])), fp.dims[b]);
  }
  sol.info.objective = cur.f + fp.constant;
  sol.info.comp_residual = nu / t;
  assemble(fp, x, t, grad, hneg);
  const double fgrad_scale = 1.0 + (fp.lin.size() ? fp.lin.cwiseAbs().maxCoeff() : 0.0);
  sol.info.stat_residual =
      grad.lpNorm<Eigen::Infinity>() / t / fgrad_scale;
  sol.info.feas_residual = 0.0;  // iterates stay interior
  sol.info.newton_iters = total_newton;
  return sol;
}

FeasCheck check_feasible(const PsdLogProgram& p,
                         const std::vector<Hermitian>& blocks, double tol) {
  FeasCheck fc;
  auto flag = [&](double viol, const std::string& note) {
    fc.max_violation = std::max(fc.max_violation, viol);
    if (viol > tol) {
      fc.ok = false;
      fc.notes.push_back(note);
    }
  };
  for (size_t b = 0; b < blocks.size(); ++b) {
    const double eig = blocks[b].min_eigenvalue();
    const double scale = std::max(1.0, blocks[b].frobenius());
    flag(std::max(0.0, -eig / scale), "block " + std::to_string(b) + " not PSD");
  }
  for (size_t k = 0; k < p.ineqs.size(); ++k) {
    double lhs = 0.0;
    for (size_t b = 0; b < blocks.size() && b < p.ineqs[k].mats.size(); ++b) {
      if (!p.ineqs[k].mats[b].empty()) lhs += p.ineqs[k].mats[b].inner(blocks[b]);
    }
    const double scale = 1.0 + std::abs(p.ineqs[k].bound);
    flag(std::max(0.0, (lhs - p.ineqs[k].bound) / scale),
         "inequality " + std::to_string(k) + " violated");
  }
  for (size_t i = 0; i < p.log_terms.size(); ++i) {
    double s = p.log_terms[i].offset;
    for (size_t b = 0; b < blocks.size() && b < p.log_terms[i].mats.size(); ++b) {
      if (!p.log_terms[i].mats[b].empty()) s += p.log_terms[i].mats[b].inner(blocks[b]);
    }
    if (s <= 0.0) {
      fc.ok = false;
      fc.notes.push_back("log term " + std::to_string(i) + " nonpositive");
    }
  }
  return fc;
}

}  // namespace scs::conic

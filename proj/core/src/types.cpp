#include "scs/types.hpp"

#include <cmath>

namespace scs {

Hermitian Hermitian::identity(Eigen::Index dim, double scale) {
  Hermitian h(dim);
  h.m_ = ComplexMat::Identity(dim, dim) * scale;
  return h;
}

Hermitian Hermitian::outer(const ComplexVec& v) {
  Hermitian h(v.size());
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      const Complex e = v(r) * std::conj(v(c));
      h.m_(r, c) = e;
      h.m_(c, r) = std::conj(e);
    }
    h.m_(c, c) = Complex(std::norm(v(c)), 0.0);
  }
  return h;
}

Hermitian Hermitian::project(const ComplexMat& a) {
  Hermitian h(a.rows());
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      const Complex e = 0.5 * (a(r, c) + std::conj(a(c, r)));
      h.m_(r, c) = e;
      h.m_(c, r) = std::conj(e);
    }
    h.m_(c, c) = Complex(a(c, c).real(), 0.0);
  }
  return h;
}

void Hermitian::set(Eigen::Index r, Eigen::Index c, Complex v) {
  if (r == c) {
    m_(r, r) = Complex(v.real(), 0.0);
    return;
  }
  m_(r, c) = v;
  m_(c, r) = std::conj(v);
}

double Hermitian::inner(const Hermitian& b) const {
  // tr(a b) = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (m_.array() * b.m_.array().conjugate()).sum().real();
}

double Hermitian::quad(const ComplexVec& v) const {
  return (v.adjoint() * m_ * v)(0, 0).real();
}

Hermitian& Hermitian::operator+=(const Hermitian& b) {
  m_ += b.m_;
  return *this;
}

Hermitian& Hermitian::operator-=(const Hermitian& b) {
  m_ -= b.m_;
  return *this;
}

Hermitian& Hermitian::operator*=(double s) {
  m_ *= s;
  return *this;
}

double Hermitian::min_eigenvalue() const {
  if (empty()) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool Hermitian::is_psd(double rel_tol) const {
  if (empty()) return true;
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  return min_eigenvalue() >= -rel_tol * scale;
}

std::pair<double, ComplexVec> Hermitian::top_eigenpair() const {
  Eigen::SelfAdjointEigenSolver<ComplexMat> es(m_);
  const Eigen::Index last = m_.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

Eigen::VectorXd svec(const Hermitian& a) {
  const Eigen::Index d = a.dim();
  Eigen::VectorXd v(svec_size(d));
  for (Eigen::Index i = 0; i < d; ++i) v(i) = a(i, i).real();
  const double rt2 = std::sqrt(2.0);
  Eigen::Index k = d;
  for (Eigen::Index y = 1; y < d; ++y) {
    for (Eigen::Index x = 0; x < y; ++x) {
      v(k++) = rt2 * a(x, y).real();
      v(k++) = rt2 * a(x, y).imag();
    }
  }
  return v;
}

Hermitian smat(const Eigen::VectorXd& v, Eigen::Index dim) {
  Hermitian a(dim);
  for (Eigen::Index i = 0; i < dim; ++i) a.set(i, i, v(i));
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Eigen::Index k = dim;
  for (Eigen::Index y = 1; y < dim; ++y) {
    for (Eigen::Index x = 0; x < y; ++x) {
      const double re = v(k++) * inv_rt2;
      const double im = v(k++) * inv_rt2;
      a.set(x, y, Complex(re, im));
    }
  }
  return a;
}

}  // namespace scs

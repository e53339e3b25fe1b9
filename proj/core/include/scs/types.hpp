#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace scs {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2d;

// Mission phase of a time slot: plain secure communication, or secure
// communication plus sensing illumination.
enum class Phase { sc, scs };

inline const char* phase_name(Phase p) { return p == Phase::sc ? "sc" : "scs"; }

// Thrown by configuration loading/validation; carries the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Complex matrix kept exactly Hermitian: the lower triangle always mirrors the
// conjugate of the upper triangle, so a == a.adjoint() holds bit-exactly.
class Hermitian {
 public:
  Hermitian() = default;
  explicit Hermitian(Eigen::Index dim) : m_(ComplexMat::Zero(dim, dim)) {}

  static Hermitian zero(Eigen::Index dim) { return Hermitian(dim); }
  static Hermitian identity(Eigen::Index dim, double scale = 1.0);
  static Hermitian outer(const ComplexVec& v);    // v v^H
  static Hermitian project(const ComplexMat& a);  // (a + a^H) / 2

  Eigen::Index dim() const { return m_.rows(); }
  bool empty() const { return m_.rows() == 0; }
  const ComplexMat& mat() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  void set(Eigen::Index r, Eigen::Index c, Complex v);  // mirrors the (c, r) entry

  double trace() const { return m_.diagonal().real().sum(); }
  double inner(const Hermitian& b) const;  // tr(a b), real for a Hermitian pair
  double quad(const ComplexVec& v) const;  // v^H a v

  Hermitian& operator+=(const Hermitian& b);
  Hermitian& operator-=(const Hermitian& b);
  Hermitian& operator*=(double s);
  friend Hermitian operator+(Hermitian a, const Hermitian& b) { a += b; return a; }
  friend Hermitian operator-(Hermitian a, const Hermitian& b) { a -= b; return a; }
  friend Hermitian operator*(Hermitian a, double s) { a *= s; return a; }
  friend Hermitian operator*(double s, Hermitian a) { a *= s; return a; }

  double min_eigenvalue() const;
  // eigenvalues >= -rel_tol * max(1, ||a||)
  bool is_psd(double rel_tol = 1e-9) const;
  std::pair<double, ComplexVec> top_eigenpair() const;
  double spectral_norm() const { return top_eigenpair().first; }
  double frobenius() const { return m_.norm(); }

 private:
  ComplexMat m_;
};

// Isometric real coordinates for Hermitian matrices: the dim diagonal entries
// first, then sqrt(2)-scaled (re, im) pairs of the upper triangle in
// column-major order. svec(a).dot(svec(b)) == tr(a b).
Eigen::VectorXd svec(const Hermitian& a);
Hermitian smat(const Eigen::VectorXd& v, Eigen::Index dim);
inline Eigen::Index svec_size(Eigen::Index dim) { return dim * dim; }

}  // namespace scs

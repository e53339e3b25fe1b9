#include "scs/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scs::geom {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double slant_distance(const Vec2& uav, double alt, const Vec2& ground) {
  return std::sqrt((uav - ground).squaredNorm() + alt * alt);
}

double departure_angle(const Vec2& uav, double alt, const Vec2& ground) {
  return std::acos(alt / slant_distance(uav, alt, ground));
}

ComplexVec steering_vector(int num_antennas, double spacing_ratio, double angle) {
  ComplexVec a(num_antennas);
  const double step = kTwoPi * spacing_ratio * std::cos(angle);
  for (int i = 0; i < num_antennas; ++i) {
    a(i) = std::polar(1.0, step * i);
  }
  return a;
}

ComplexVec channel_vector(const Vec2& uav, double alt, const Vec2& ground,
                          int num_antennas, double spacing_ratio,
                          double pathloss_ref) {
  const double d = slant_distance(uav, alt, ground);
  const double gain = std::sqrt(pathloss_ref) / d;
  return steering_vector(num_antennas, spacing_ratio,
                         departure_angle(uav, alt, ground)) *
         gain;
}

double eta(const Hermitian& w, const Vec2& uav, double alt, const Vec2& ground,
           double spacing_ratio) {
  const Eigen::Index m = w.dim();
  const double d = slant_distance(uav, alt, ground);
  const double phase_step = kTwoPi * spacing_ratio * alt / d;  // per antenna gap
  double sum = 0.0;
  for (Eigen::Index y = 0; y < m; ++y) sum += w(y, y).real();
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = x + 1; y < m; ++y) {
      const Complex e = w(x, y);
      sum += 2.0 * std::abs(e) * std::cos(std::arg(e) + phase_step * double(y - x));
    }
  }
  return sum;
}

}  // namespace scs::geom

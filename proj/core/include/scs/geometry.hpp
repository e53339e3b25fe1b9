#pragma once

#include "scs/types.hpp"

// Line-of-sight air-to-ground geometry: slant distances, departure angles,
// uniform-linear-array steering vectors and the channel vectors built from
// them. All functions are pure.
namespace scs::geom {

// sqrt(||uav - ground||^2 + alt^2), alt > 0.
double slant_distance(const Vec2& uav, double alt, const Vec2& ground);

// Departure angle measured from the vertical array axis, in [0, pi/2).
double departure_angle(const Vec2& uav, double alt, const Vec2& ground);

// Element i carries phase 2*pi * spacing_ratio * i * cos(angle); element 0 is 1.
ComplexVec steering_vector(int num_antennas, double spacing_ratio, double angle);

// steering_vector scaled by sqrt(pathloss_ref / dist^2); ||h||^2 = M*beta/d^2.
ComplexVec channel_vector(const Vec2& uav, double alt, const Vec2& ground,
                          int num_antennas, double spacing_ratio,
                          double pathloss_ref);

// a^H W a for the steering vector of this geometry, evaluated directly from
// the matrix entries. cos(angle) is substituted as alt/dist, so no
// trigonometric round trip is involved.
double eta(const Hermitian& w, const Vec2& uav, double alt, const Vec2& ground,
           double spacing_ratio);

}  // namespace scs::geom

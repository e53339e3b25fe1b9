#pragma once

#include <span>

#include "scs/types.hpp"

namespace scs {

// Residual interference levels after successive interference cancellation;
// 1 means no cancellation, 0 means perfect.
struct ResidLevels {
  double jam_bob = 0.0;
  double jam_eve = 0.0;
  double sense_bob = 0.0;
  double sense_eve = 0.0;
};

struct Noises {
  double bob = 0.0;
  double eve = 0.0;
};

// Per-slot transmit covariances, all Hermitian PSD (watts). sense stays the
// zero matrix outside sensing slots.
struct SlotBeams {
  Hermitian alice;  // information beam covariance W_a
  Hermitian jack;   // jamming beam covariance W_j
  Hermitian sense;  // sensing covariance R_r

  static SlotBeams zero(Eigen::Index dim) {
    return {Hermitian::zero(dim), Hermitian::zero(dim), Hermitian::zero(dim)};
  }
};

bool beams_within_budget(const SlotBeams& b, double p_max_alice,
                         double p_max_jack, double tol);

}  // namespace scs

namespace scs::metrics {

// Received SINR at one ground node. All beam terms enter as quadratic/trace
// forms, so relaxed (non-rank-one) covariances evaluate consistently.
// Throws std::invalid_argument when noise and interference are both zero.
double sinr(Phase phase, const SlotBeams& beams, const ComplexVec& h_alice,
            const ComplexVec& h_jack, double resid_jam, double resid_sense,
            double noise);

// log2(1+sinr_bob) - log2(1+sinr_eve); clamped at zero when clamp is set.
// Optimization consumes the smooth unclamped value, reporting clamps.
double secrecy_rate(Phase phase, const SlotBeams& beams,
                    const ComplexVec& h_alice_bob, const ComplexVec& h_jack_bob,
                    const ComplexVec& h_alice_eve, const ComplexVec& h_jack_eve,
                    const ResidLevels& resid, const Noises& noise, bool clamp);

// Mean of the given (already clamped) per-slot rates. Throws on an empty set.
double asr(std::span<const double> clamped_rates);

// Distance-normalized sum beampattern gain at a ground target: incident power
// density contributed by both transmit covariances, each divided by its
// squared slant distance (no pathloss factor).
double beampattern_gain(const SlotBeams& beams, const Vec2& alice,
                        const Vec2& jack, const Vec2& target, double alt_alice,
                        double alt_jack, double spacing_ratio);

}  // namespace scs::metrics

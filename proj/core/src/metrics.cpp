#include "scs/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "scs/geometry.hpp"

namespace scs {

bool beams_within_budget(const SlotBeams& b, double p_max_alice,
                         double p_max_jack, double tol) {
  const double tr_sense = b.sense.empty() ? 0.0 : b.sense.trace();
  if (b.alice.trace() + tr_sense > p_max_alice + tol) return false;
  if (!b.jack.empty() && b.jack.trace() > p_max_jack + tol) return false;
  const double eig_tol = 1e-9;
  return b.alice.is_psd(eig_tol) && b.jack.is_psd(eig_tol) &&
         b.sense.is_psd(eig_tol);
}

}  // namespace scs

namespace scs::metrics {

double sinr(Phase phase, const SlotBeams& beams, const ComplexVec& h_alice,
            const ComplexVec& h_jack, double resid_jam, double resid_sense,
            double noise) {
  const double signal = beams.alice.empty() ? 0.0 : beams.alice.quad(h_alice);
  double denom = noise;
  if (resid_jam > 0.0 && !beams.jack.empty() && h_jack.size() > 0) {
    denom += resid_jam * beams.jack.quad(h_jack);
  }
  if (phase == Phase::scs && resid_sense > 0.0 && !beams.sense.empty()) {
    denom += resid_sense * beams.sense.quad(h_alice);
  }
  if (denom <= 0.0) {
    throw std::invalid_argument("sinr: zero noise and zero interference");
  }
  return signal / denom;
}

double secrecy_rate(Phase phase, const SlotBeams& beams,
                    const ComplexVec& h_alice_bob, const ComplexVec& h_jack_bob,
                    const ComplexVec& h_alice_eve, const ComplexVec& h_jack_eve,
                    const ResidLevels& resid, const Noises& noise, bool clamp) {
  const double g_bob = sinr(phase, beams, h_alice_bob, h_jack_bob,
                            resid.jam_bob, resid.sense_bob, noise.bob);
  const double g_eve = sinr(phase, beams, h_alice_eve, h_jack_eve,
                            resid.jam_eve, resid.sense_eve, noise.eve);
  const double rate = std::log2(1.0 + g_bob) - std::log2(1.0 + g_eve);
  return clamp ? std::max(rate, 0.0) : rate;
}

double asr(std::span<const double> clamped_rates) {
  if (clamped_rates.empty()) {
    throw std::invalid_argument("asr: empty slot set");
  }
  double sum = 0.0;
  for (double r : clamped_rates) sum += r;
  return sum / double(clamped_rates.size());
}

double beampattern_gain(const SlotBeams& beams, const Vec2& alice,
                        const Vec2& jack, const Vec2& target, double alt_alice,
                        double alt_jack, double spacing_ratio) {
  double gain = 0.0;
  if (!beams.alice.empty() || !beams.sense.empty()) {
    const double d2 = (alice - target).squaredNorm() + alt_alice * alt_alice;
    double num = 0.0;
    if (!beams.alice.empty()) {
      num += geom::eta(beams.alice, alice, alt_alice, target, spacing_ratio);
    }
    if (!beams.sense.empty()) {
      num += geom::eta(beams.sense, alice, alt_alice, target, spacing_ratio);
    }
    gain += num / d2;
  }
  if (!beams.jack.empty()) {
    const double d2 = (jack - target).squaredNorm() + alt_jack * alt_jack;
    gain += geom::eta(beams.jack, jack, alt_jack, target, spacing_ratio) / d2;
  }
  return gain;
}

}  // namespace scs::metrics

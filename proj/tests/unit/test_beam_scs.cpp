#include "scs/beam_scs.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scs/geometry.hpp"
#include "scs/metrics.hpp"

using namespace scs;
using beam::Budgets;
using beam::ScChannels;
using beam::SenseGeometry;

namespace {

struct Setup {
  ScChannels ch;
  SenseGeometry geo;
};

Setup sensing_slot(const Vec2& u_alice, const Vec2& u_jack, const Vec2& target,
                   int m = 4) {
  Setup s;
  s.ch.alice_bob = geom::channel_vector(u_alice, 120, {40, 60}, m, 0.5, 1e-3);
  s.ch.alice_eve = geom::channel_vector(u_alice, 120, {60, 60}, m, 0.5, 1e-3);
  s.ch.jack_bob = geom::channel_vector(u_jack, 100, {40, 60}, m, 0.5, 1e-3);
  s.ch.jack_eve = geom::channel_vector(u_jack, 100, {60, 60}, m, 0.5, 1e-3);
  s.geo.steer_alice = geom::steering_vector(
      m, 0.5, geom::departure_angle(u_alice, 120, target));
  s.geo.steer_jack = geom::steering_vector(
      m, 0.5, geom::departure_angle(u_jack, 100, target));
  s.geo.dist2_alice = (u_alice - target).squaredNorm() + 120.0 * 120;
  s.geo.dist2_jack = (u_jack - target).squaredNorm() + 100.0 * 100;
  return s;
}

const ResidLevels kResid{0.01, 1.0, 0.01, 1.0};
const Noises kNoise{1e-11, 1e-11};
const Budgets kBudgets{1.0, 0.31622776601683794};

double scs_oracle(const Hermitian& wa, const Hermitian& wj, const Hermitian& rr,
                  const ScChannels& ch, const ResidLevels& resid,
                  const Noises& noise) {
  const auto q = [](const Hermitian& w, const ComplexVec& h) {
    return (h.adjoint() * w.mat() * h)(0, 0).real();
  };
  const double gb = q(wa, ch.alice_bob) /
                    (resid.sense_bob * q(rr, ch.alice_bob) +
                     resid.jam_bob * q(wj, ch.jack_bob) + noise.bob);
  const double ge = q(wa, ch.alice_eve) /
                    (resid.sense_eve * q(rr, ch.alice_eve) +
                     resid.jam_eve * q(wj, ch.jack_eve) + noise.eve);
  return std::log2(1.0 + gb) - std::log2(1.0 + ge);
}

}  // namespace

TEST_CASE("lifted rate with a sensing covariance") {
  test::Rng rng(401);
  const int m = 4;
  const Setup s = sensing_slot({30, 40}, {55, 50}, {50, 10});

  SUBCASE("zero sensing covariance reduces to the plain rate") {
    const Hermitian wa = test::random_psd(rng, m, 0.6);
    const Hermitian wj = test::random_psd(rng, m, 0.2);
    CHECK(beam::scs_rate_lifted(wa, wj, Hermitian::zero(m), s.ch, kResid, kNoise) ==
          doctest::Approx(beam::sc_rate_lifted(wa, wj, s.ch, kResid, kNoise))
              .epsilon(1e-12));
  }
  SUBCASE("sensing power that only Eve hears never hurts") {
    const ResidLevels lopsided{0.01, 1.0, 0.0, 1.0};
    const Hermitian wa = test::random_psd(rng, m, 0.5);
    const Hermitian wj = test::random_psd(rng, m, 0.2);
    double prev = beam::scs_rate_lifted(wa, wj, Hermitian::zero(m), s.ch,
                                        lopsided, kNoise);
    Hermitian rr = test::random_psd(rng, m, 0.1);
    for (int k = 1; k <= 5; ++k) {
      const double r = beam::scs_rate_lifted(wa, wj, rr * double(k), s.ch,
                                             lopsided, kNoise);
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
  }
  SUBCASE("random instances match the quadratic-form oracle") {
    for (int rep = 0; rep < 200; ++rep) {
      const Hermitian wa = test::random_psd(rng, m, test::uniform(rng, 0.1, 0.8));
      const Hermitian wj = test::random_psd(rng, m, test::uniform(rng, 0.05, 0.3));
      const Hermitian rr = test::random_psd(rng, m, test::uniform(rng, 0.0, 0.4));
      CHECK(beam::scs_rate_lifted(wa, wj, rr, s.ch, kResid, kNoise) ==
            doctest::Approx(scs_oracle(wa, wj, rr, s.ch, kResid, kNoise))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("sensing-phase bound") {
  test::Rng rng(409);
  const int m = 4;
  const Setup s = sensing_slot({30, 40}, {55, 50}, {50, 10});

  SUBCASE("tight at the expansion point, lower bound elsewhere") {
    const Hermitian wa0 = test::random_psd(rng, m, 0.4);
    const Hermitian wj0 = test::random_psd(rng, m, 0.15);
    const Hermitian rr0 = test::random_psd(rng, m, 0.2);
    const auto bd = beam::build_scs_bound(wa0, wj0, rr0, s.ch, kResid, kNoise);
    CHECK(bd.value(wa0, wj0, rr0) ==
          doctest::Approx(beam::scs_rate_lifted(wa0, wj0, rr0, s.ch, kResid,
                                                kNoise))
              .epsilon(1e-9));
    for (int rep = 0; rep < 200; ++rep) {
      const Hermitian wa = test::random_psd(rng, m, test::uniform(rng, 0.05, 0.7));
      const Hermitian wj = test::random_psd(rng, m, test::uniform(rng, 0.02, 0.3));
      const Hermitian rr = test::random_psd(rng, m, test::uniform(rng, 0.0, 0.3));
      CHECK(bd.value(wa, wj, rr) <=
            beam::scs_rate_lifted(wa, wj, rr, s.ch, kResid, kNoise) + 1e-9);
    }
  }
  SUBCASE("collapses to the plain bound when the sensing covariance is zero") {
    const Hermitian wa0 = test::random_psd(rng, m, 0.4);
    const Hermitian wj0 = test::random_psd(rng, m, 0.15);
    const Hermitian zero = Hermitian::zero(m);
    const auto scs_bd = beam::build_scs_bound(wa0, wj0, zero, s.ch, kResid, kNoise);
    const auto sc_bd = beam::build_sc_bound(wa0, wj0, s.ch, kResid, kNoise);
    CHECK(scs_bd.a == doctest::Approx(sc_bd.a).epsilon(1e-12));
    CHECK(scs_bd.b == doctest::Approx(sc_bd.b).epsilon(1e-12));
    CHECK(scs_bd.c == doctest::Approx(sc_bd.c).epsilon(1e-12));
    for (int rep = 0; rep < 20; ++rep) {
      const Hermitian wa = test::random_psd(rng, m, 0.5);
      const Hermitian wj = test::random_psd(rng, m, 0.2);
      CHECK(scs_bd.value(wa, wj, zero) ==
            doctest::Approx(sc_bd.value(wa, wj)).epsilon(1e-10));
    }
  }
}

TEST_CASE("sensing slot solve") {
  SolverConfig cfg;
  const Setup near = sensing_slot({45, 30}, {55, 35}, {50, 20});

  SUBCASE("unconstrained solve matches the plain slot solver") {
    const auto scs_res = beam::solve_scs_slot(near.ch, near.geo, kResid, kNoise,
                                              kBudgets, /*gain_floor=*/0.0, cfg);
    const auto sc_res = beam::solve_sc_slot(near.ch, kResid, kNoise, kBudgets, cfg);
    const double scs_rate =
        beam::scs_rate_lifted(scs_res.stored.alice, scs_res.stored.jack,
                              scs_res.stored.sense, near.ch, kResid, kNoise);
    const double sc_rate = beam::sc_rate_lifted(Hermitian::outer(sc_res.w_alice),
                                                Hermitian::outer(sc_res.w_jack),
                                                near.ch, kResid, kNoise);
    CHECK(scs_rate == doctest::Approx(sc_rate).epsilon(1e-4));
    CHECK(scs_res.stored.sense.trace() <= 1e-3);  // interference-only power dies out
  }

  SUBCASE("inactive floor leaves the communication design unchanged") {
    // target straight under Alice; even the matched-to-Bob beam clears a
    // floor just below its own gain
    const Setup under = sensing_slot({50, 20}, {55, 35}, {50, 20});
    const auto sc_res = beam::solve_sc_slot(under.ch, kResid, kNoise, kBudgets, cfg);
    SlotBeams sc_beams = SlotBeams::zero(4);
    sc_beams.alice = Hermitian::outer(sc_res.w_alice);
    sc_beams.jack = Hermitian::outer(sc_res.w_jack);
    const double sc_gain = metrics::beampattern_gain(
        sc_beams, {50, 20}, {55, 35}, {50, 20}, 120, 100, 0.5);
    const double floor = sc_gain * 0.8;
    const auto res = beam::solve_scs_slot(under.ch, under.geo, kResid, kNoise,
                                          kBudgets, floor, cfg);
    const double sc_rate = beam::sc_rate_lifted(sc_beams.alice, sc_beams.jack,
                                                under.ch, kResid, kNoise);
    const double scs_rate =
        beam::scs_rate_lifted(res.stored.alice, res.stored.jack,
                              res.stored.sense, under.ch, kResid, kNoise);
    CHECK(scs_rate == doctest::Approx(sc_rate).epsilon(1e-4));
    CHECK(res.achieved_gain >= floor * (1.0 - 1e-9));
  }

  SUBCASE("impossible floor throws with the achievable value") {
    const double too_high = near.geo.dist2_alice > 0 ? 1.0 : 0.0;  // 1 W gain
    CHECK_THROWS_AS(beam::solve_scs_slot(near.ch, near.geo, kResid, kNoise,
                                         kBudgets, too_high, cfg),
                    beam::SensingInfeasible);
    try {
      beam::solve_scs_slot(near.ch, near.geo, kResid, kNoise, kBudgets, too_high,
                           cfg);
    } catch (const beam::SensingInfeasible& e) {
      const double expect = 4.0 * kBudgets.alice / near.geo.dist2_alice +
                            4.0 * kBudgets.jack / near.geo.dist2_jack;
      CHECK(e.achievable == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("floor holds at the stored covariances and rate falls with the floor") {
    const double max_gain = 4.0 * kBudgets.alice / near.geo.dist2_alice +
                            4.0 * kBudgets.jack / near.geo.dist2_jack;
    double prev_rate = std::numeric_limits<double>::infinity();
    for (const double frac : {0.02, 0.2, 0.5, 0.8}) {
      const double floor = max_gain * frac;
      const auto res = beam::solve_scs_slot(near.ch, near.geo, kResid, kNoise,
                                            kBudgets, floor, cfg);
      CHECK(res.achieved_gain >= floor * (1.0 - 1e-8));
      CHECK(beams_within_budget(res.stored, kBudgets.alice, kBudgets.jack, 1e-8));
      const double rate =
          beam::scs_rate_lifted(res.stored.alice, res.stored.jack,
                                res.stored.sense, near.ch, kResid, kNoise);
      CHECK(rate <= prev_rate + 1e-6);
      prev_rate = rate;
      // the true rate never drops along the iterate trace
      for (size_t i = 1; i < res.log.rate_trace.size(); ++i) {
        CHECK(res.log.rate_trace[i] >= res.log.rate_trace[i - 1] - 1e-6);
      }
    }
  }

  SUBCASE("more jamming power never hurts under one-sided cancellation") {
    // Bob cancels everything, Eve cancels nothing
    const ResidLevels one_sided{0.0, 1.0, 0.0, 1.0};
    const double floor = 0.5 * (4.0 * kBudgets.alice / near.geo.dist2_alice);
    double prev = -std::numeric_limits<double>::infinity();
    for (const double pj : {0.1, 0.31622776601683794, 1.0}) {
      const auto res = beam::solve_scs_slot(near.ch, near.geo, one_sided, kNoise,
                                            {kBudgets.alice, pj}, floor, cfg);
      const double rate =
          beam::scs_rate_lifted(res.stored.alice, res.stored.jack,
                                res.stored.sense, near.ch, one_sided, kNoise);
      CHECK(rate >= prev - 1e-6);
      prev = rate;
    }
  }
}

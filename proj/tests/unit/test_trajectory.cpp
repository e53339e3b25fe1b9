#include "scs/trajectory.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scs/beam_sc.hpp"
#include "scs/geometry.hpp"
#include "scs/mission.hpp"

using namespace scs;
using traj::SlotFixed;
using traj::Trajectory;

namespace {

SlotFixed random_fixed(test::Rng& rng, int m = 4) {
  SlotFixed f;
  f.w_alice = test::random_psd(rng, m, test::uniform(rng, 0.2, 1.0));
  f.w_jack = test::random_psd(rng, m, test::uniform(rng, 0.05, 0.3));
  f.bob = Vec2(test::uniform(rng, -80, 80), test::uniform(rng, -80, 80));
  f.eve = Vec2(test::uniform(rng, -80, 80), test::uniform(rng, -80, 80));
  f.alt_alice = test::uniform(rng, 90, 150);
  f.alt_jack = test::uniform(rng, 70, 130);
  f.spacing_ratio = 0.5;
  f.pathloss_ref = 1e-3;
  f.resid = {test::uniform(rng, 0, 0.2), test::uniform(rng, 0.5, 1.0),
             test::uniform(rng, 0, 0.2), test::uniform(rng, 0.5, 1.0)};
  f.noise = {1e-11, 1e-11};
  return f;
}

double lifted_at(const Vec2& u_alice, const Vec2& u_jack, const SlotFixed& f) {
  beam::ScChannels ch;
  const int m = int(f.w_alice.dim());
  ch.alice_bob = geom::channel_vector(u_alice, f.alt_alice, f.bob, m,
                                      f.spacing_ratio, f.pathloss_ref);
  ch.alice_eve = geom::channel_vector(u_alice, f.alt_alice, f.eve, m,
                                      f.spacing_ratio, f.pathloss_ref);
  ch.jack_bob = geom::channel_vector(u_jack, f.alt_jack, f.bob, m,
                                     f.spacing_ratio, f.pathloss_ref);
  ch.jack_eve = geom::channel_vector(u_jack, f.alt_jack, f.eve, m,
                                     f.spacing_ratio, f.pathloss_ref);
  return beam::sc_rate_lifted(f.w_alice, f.w_jack, ch,
                              {f.resid.jam_bob, f.resid.jam_eve, 0, 0}, f.noise);
}

Vec2 random_pos(test::Rng& rng) {
  return {test::uniform(rng, -100, 100), test::uniform(rng, -100, 100)};
}

}  // namespace

TEST_CASE("position-form rates are exact rewrites") {
  test::Rng rng(501);
  for (int rep = 0; rep < 500; ++rep) {
    const SlotFixed f = random_fixed(rng);
    const Vec2 ua = random_pos(rng), uj = random_pos(rng);
    const double lifted = lifted_at(ua, uj, f);
    const double via_alice = traj::rate_at_alice_pos(ua, uj, f);
    const double via_jack = traj::rate_at_jack_pos(uj, ua, f);
    const double scale = 1.0 + std::abs(lifted);
    CHECK(std::abs(via_alice - lifted) <= 1e-9 * scale);
    CHECK(std::abs(via_jack - lifted) <= 1e-9 * scale);
  }
}

TEST_CASE("position-form degeneracies") {
  test::Rng rng(503);
  SlotFixed f = random_fixed(rng);
  const Vec2 ua = random_pos(rng), uj = random_pos(rng);

  SUBCASE("no information beam, no rate") {
    f.w_alice = Hermitian::zero(4);
    CHECK(traj::rate_at_alice_pos(ua, uj, f) == doctest::Approx(0.0));
  }
  SUBCASE("symmetric nodes cancel") {
    f.eve = f.bob;
    f.resid.jam_eve = f.resid.jam_bob;
    f.noise.eve = f.noise.bob;
    CHECK(traj::rate_at_alice_pos(ua, uj, f) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("fully cancelled jamming makes the rate independent of the jammer") {
    f.resid.jam_bob = f.resid.jam_eve = 0.0;
    const double r1 = traj::rate_at_jack_pos(uj, ua, f);
    const double r2 = traj::rate_at_jack_pos(uj + Vec2(40, -25), ua, f);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
  }
  SUBCASE("zero jamming covariance does the same") {
    f.w_jack = Hermitian::zero(4);
    const double r1 = traj::rate_at_jack_pos(uj, ua, f);
    const double r2 = traj::rate_at_jack_pos(uj + Vec2(-30, 18), ua, f);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
  }
}

TEST_CASE("linearizations are tight and match finite differences") {
  test::Rng rng(509);

  SUBCASE("alice gradient vs central differences") {
    for (int rep = 0; rep < 200; ++rep) {
      const SlotFixed f = random_fixed(rng);
      const Vec2 ua = random_pos(rng), uj = random_pos(rng);
      const auto lin = traj::linearize_alice(ua, uj, f);
      CHECK(lin.alpha ==
            doctest::Approx(traj::rate_at_alice_pos(ua, uj, f)).epsilon(1e-9));
      CHECK(lin.zeta_num_bob > 0);
      CHECK(lin.zeta_den_bob > 0);
      CHECK(lin.zeta_num_eve > 0);
      CHECK(lin.zeta_den_eve > 0);
      const Vec2 fd = test::fd_gradient(
          [&](const Vec2& u) { return traj::rate_at_alice_pos(u, uj, f); }, ua);
      CHECK((lin.rho - fd).norm() <= 1e-3 * std::max(fd.norm(), 1e-12));
    }
  }
  SUBCASE("jack gradient vs central differences") {
    for (int rep = 0; rep < 200; ++rep) {
      const SlotFixed f = random_fixed(rng);
      const Vec2 ua = random_pos(rng), uj = random_pos(rng);
      const auto lin = traj::linearize_jack(uj, ua, f);
      CHECK(lin.alpha ==
            doctest::Approx(traj::rate_at_jack_pos(uj, ua, f)).epsilon(1e-9));
      const Vec2 fd = test::fd_gradient(
          [&](const Vec2& u) { return traj::rate_at_jack_pos(u, ua, f); }, uj);
      CHECK((lin.rho - fd).norm() <= 1e-3 * std::max(fd.norm(), 1e-12));
    }
  }
  SUBCASE("single antenna loses the steering-phase terms") {
    for (int rep = 0; rep < 20; ++rep) {
      const SlotFixed base = random_fixed(rng);
      SlotFixed f = base;
      f.w_alice = Hermitian::identity(1, base.w_alice.trace());
      f.w_jack = Hermitian::identity(1, base.w_jack.trace());
      const Vec2 ua = random_pos(rng), uj = random_pos(rng);
      const auto lin = traj::linearize_alice(ua, uj, f);
      const Vec2 fd = test::fd_gradient(
          [&](const Vec2& u) { return traj::rate_at_alice_pos(u, uj, f); }, ua,
          1e-4);
      CHECK((lin.rho - fd).norm() <= 1e-6 * std::max(fd.norm(), 1e-10));
    }
  }
  SUBCASE("symmetric geometry zeroes the cross component for jack") {
    SlotFixed f = random_fixed(rng);
    f.bob = Vec2(-30, 0);
    f.eve = Vec2(30, 0);
    f.resid.jam_eve = f.resid.jam_bob = 0.05;
    f.noise = {1e-11, 1e-11};
    f.w_alice = Hermitian::identity(4, 0.5);  // isotropic, symmetric signal
    f.w_jack = Hermitian::identity(4, 0.2);
    const Vec2 ua(0, 40);
    const Vec2 uj(0, -25);  // on the perpendicular bisector
    const auto lin = traj::linearize_jack(uj, ua, f);
    CHECK(std::abs(lin.rho.x()) <= 1e-12 + 1e-9 * std::abs(lin.rho.y()));
  }
}

TEST_CASE("path checks") {
  const Trajectory line = traj::straight_line({0, 0}, {100, 0}, 20, 120);
  CHECK(line.slots() == 20);
  const auto chk = traj::check_path(line, {0, 0}, {100, 0}, 10.0);
  CHECK(chk.ok());
  CHECK(chk.max_step == doctest::Approx(5.0));

  Trajectory bad = line;
  bad.pts[5] += Vec2(20, 0);
  CHECK(!traj::check_path(bad, {0, 0}, {100, 0}, 10.0).ok());

  Trajectory other = traj::straight_line({0, 0}, {100, 0}, 20, 100);
  CHECK(traj::min_separation(line, other) == doctest::Approx(20.0));
}

namespace {

// case-1 style context for the update loops
struct Mission {
  Scenario s;
  Trajectory alice, jack;
  std::vector<SlotBeams> beams;
};

Mission make_mission() {
  Mission m;
  m.s = default_scenario();
  m.s.solver.max_tr_iters = 25;
  const MissionGrid grid = mission_grid(m.s);
  m.alice = traj::straight_line(m.s.alice_start, m.s.alice_end, grid.num_slots,
                                m.s.alt_alice);
  m.jack = traj::straight_line(m.s.jack_start, m.s.jack_end, grid.num_slots,
                               m.s.alt_jack);
  for (int n = 1; n <= grid.num_slots; ++n) {
    const auto ch = mission::slot_channels(m.s, m.alice.at(n), m.jack.at(n), true);
    SlotBeams b = SlotBeams::zero(m.s.num_antennas);
    b.alice = beam::mrt_lift(ch.alice_bob, m.s.p_max_alice);
    b.jack = beam::mrt_lift(ch.jack_eve, m.s.p_max_jack);
    m.beams.push_back(b);
  }
  return m;
}

double mean_alice_rate(const Mission& m, const Trajectory& path) {
  double sum = 0.0;
  for (int n = 1; n <= path.slots(); ++n) {
    SlotFixed f;
    f.w_alice = m.beams[size_t(n - 1)].alice;
    f.w_jack = m.beams[size_t(n - 1)].jack;
    f.bob = m.s.bob_pos;
    f.eve = m.s.eve_pos;
    f.alt_alice = m.s.alt_alice;
    f.alt_jack = m.s.alt_jack;
    f.spacing_ratio = m.s.spacing_ratio;
    f.pathloss_ref = m.s.pathloss_ref;
    f.resid = {m.s.resid_jam_bob, m.s.resid_jam_eve, 0, 0};
    f.noise = {m.s.noise_bob, m.s.noise_eve};
    sum += traj::rate_at_alice_pos(path.at(n), m.jack.at(n), f);
  }
  return sum / double(path.slots());
}

}  // namespace

TEST_CASE("trajectory updates") {
  Mission m = make_mission();
  const MissionGrid grid = mission_grid(m.s);

  SUBCASE("zero trust radius returns the input unchanged") {
    Scenario s0 = m.s;
    s0.solver.trust_radius_init = 0.0;
    const auto res = traj::solve_alice_trajectory(s0, m.alice, m.jack, m.beams);
    CHECK(res.iterations == 0);
    for (size_t i = 0; i < m.alice.pts.size(); ++i) {
      CHECK((res.path.pts[i] - m.alice.pts[i]).norm() == 0.0);
    }
  }

  SUBCASE("fully pinned geometry cannot move") {
    Scenario s0 = m.s;
    s0.alice_start = {0, 0};
    s0.alice_end = {40, 0};
    s0.jack_start = {0, 0};
    s0.jack_end = {40, 0};
    s0.horizon = 2.0;  // 4 slots, D_max 10, span exactly 40
    s0.slot_len = 0.5;
    s0.targets = {{20, 0}};
    s0.slots_per_target = 1;
    const int slots = mission_grid(s0).num_slots;
    Trajectory a = traj::straight_line(s0.alice_start, s0.alice_end, slots,
                                       s0.alt_alice);
    Trajectory j = traj::straight_line(s0.jack_start, s0.jack_end, slots,
                                       s0.alt_jack);
    std::vector<SlotBeams> beams;
    for (int n = 1; n <= slots; ++n) {
      const auto ch = mission::slot_channels(s0, a.at(n), j.at(n), true);
      SlotBeams b = SlotBeams::zero(s0.num_antennas);
      b.alice = beam::mrt_lift(ch.alice_bob, s0.p_max_alice);
      b.jack = beam::mrt_lift(ch.jack_eve, s0.p_max_jack);
      beams.push_back(b);
    }
    const auto res = traj::solve_alice_trajectory(s0, a, j, beams);
    for (int n = 0; n <= slots; ++n) {
      CHECK((res.path.pts[size_t(n)] - a.pts[size_t(n)]).norm() <= 1e-4);
    }
  }

  SUBCASE("alice moves toward bob and improves") {
    const double before = mean_alice_rate(m, m.alice);
    const auto res = traj::solve_alice_trajectory(m.s, m.alice, m.jack, m.beams);
    const double after = mean_alice_rate(m, res.path);
    CHECK(after >= before - 1e-6);
    CHECK(after > before + 1e-3);  // strict progress on this geometry

    // strictly nearer to Bob than the straight line at the closest approach
    double best_line = 1e300, best_opt = 1e300;
    for (int n = 1; n <= grid.num_slots; ++n) {
      best_line = std::min(best_line, (m.alice.at(n) - m.s.bob_pos).norm());
      best_opt = std::min(best_opt, (res.path.at(n) - m.s.bob_pos).norm());
    }
    CHECK(best_opt < best_line);

    // feasibility via the independent checker
    const auto chk =
        traj::check_path(res.path, m.s.alice_start, m.s.alice_end, grid.max_step);
    CHECK(chk.ok());

    // geometric trust-region schedule
    for (size_t i = 1; i < res.radius_trace.size(); ++i) {
      CHECK(res.radius_trace[i] ==
            doctest::Approx(res.radius_trace[i - 1] * m.s.solver.shrink_alice));
    }
  }

  SUBCASE("jack approaches eve and never loses rate") {
    const auto res = traj::solve_jack_trajectory(m.s, m.jack, m.alice, m.beams);
    CHECK(res.mean_rate >= mean_alice_rate(m, m.alice) - 1e-6);
    double best_line = 1e300, best_opt = 1e300;
    for (int n = 1; n <= grid.num_slots; ++n) {
      best_line = std::min(best_line, (m.jack.at(n) - m.s.eve_pos).norm());
      best_opt = std::min(best_opt, (res.path.at(n) - m.s.eve_pos).norm());
    }
    CHECK(best_opt < best_line);
    CHECK(traj::check_path(res.path, m.s.jack_start, m.s.jack_end, grid.max_step)
              .ok());
  }

  SUBCASE("cancelled jamming leaves jack where he is") {
    Scenario s0 = m.s;
    s0.resid_jam_bob = s0.resid_jam_eve = 0.0;
    Mission m0 = m;
    for (auto& b : m0.beams) b.jack = Hermitian::zero(s0.num_antennas);
    const auto res = traj::solve_jack_trajectory(s0, m0.jack, m0.alice, m0.beams);
    // constant objective: the output must stay feasible and equal the input
    for (size_t i = 0; i < m0.jack.pts.size(); ++i) {
      CHECK((res.path.pts[i] - m0.jack.pts[i]).norm() <= 1e-6);
    }
  }
}

TEST_CASE("separation lower bound holds after linearized steps") {
  // the linearized floor is a true lower bound on the squared separation
  test::Rng rng(523);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec2 ua_t = random_pos(rng), uj = random_pos(rng), ua = random_pos(rng);
    const double lin = (ua_t - uj).squaredNorm() +
                       2.0 * (ua_t - uj).dot(ua - ua_t);
    CHECK(lin <= (ua - uj).squaredNorm() + 1e-9);
  }
}

TEST_CASE("fly-hover-fly") {
  Scenario s = default_scenario();

  SUBCASE("case-1 kinematics for alice") {
    const Trajectory t = traj::fhf_trajectory(s, true);
    CHECK(t.pts.front() == s.alice_start);
    CHECK(t.pts.back() == s.alice_end);
    CHECK(traj::check_path(t, s.alice_start, s.alice_end, 10.0).ok());
    // reach in ceil(72.11/10)=8 slots, return needs ceil(84.85/10)=9,
    // leaving 3 hover slots at Bob
    int hover = 0;
    for (int n = 0; n <= t.slots(); ++n) {
      if ((t.at(n) - s.bob_pos).norm() < 1e-9) ++hover;
    }
    CHECK(hover == 4);  // slots 8..11 inclusive hold the hover point
    CHECK((t.at(8) - s.bob_pos).norm() < 1e-9);
    CHECK((t.at(11) - s.bob_pos).norm() < 1e-9);
  }

  SUBCASE("hover point on the segment with slack leaves repeated points") {
    s.bob_pos = {50, 0};
    const Trajectory t = traj::fhf_trajectory(s, true);
    int repeats = 0;
    for (int n = 1; n <= t.slots(); ++n) {
      if ((t.at(n) - t.at(n - 1)).norm() < 1e-12) ++repeats;
    }
    CHECK(repeats >= 1);
    CHECK(traj::check_path(t, s.alice_start, s.alice_end, 10.0).ok());
  }

  SUBCASE("exactly enough time flies straight with no hover") {
    s.horizon = 5.0;  // 10 slots, 10 m each: exactly the 100 m span
    s.bob_pos = {50, 0};
    s.targets = {{50, 10}};
    s.slots_per_target = 1;
    const Trajectory t = traj::fhf_trajectory(s, true);
    for (int n = 0; n <= t.slots(); ++n) {
      CHECK(t.at(n).y() == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(t.at(n).x() == doctest::Approx(10.0 * n).epsilon(1e-9));
    }
  }

  SUBCASE("unreachable hover point falls back to closest approach") {
    s.bob_pos = {50, 400};
    const Trajectory t = traj::fhf_trajectory(s, true);
    CHECK(traj::check_path(t, s.alice_start, s.alice_end, 10.0).ok());
    // closest approach is strictly closer than either endpoint
    double best = 1e300;
    for (int n = 0; n <= t.slots(); ++n) {
      best = std::min(best, (t.at(n) - s.bob_pos).norm());
    }
    CHECK(best < (s.alice_start - s.bob_pos).norm());
    CHECK(best < (s.alice_end - s.bob_pos).norm());
  }

  SUBCASE("terminal point out of reach throws") {
    s.horizon = 2.0;  // 4 slots * 10 m < 100 m
    s.targets = {{50, 10}};
    s.slots_per_target = 1;
    CHECK_THROWS_AS(traj::fhf_trajectory(s, true), std::runtime_error);
  }
}

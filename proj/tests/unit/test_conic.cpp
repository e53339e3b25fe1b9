#include "scs/conic.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace scs;
using conic::PsdLogProgram;
using conic::WaypointProgram;

namespace {

PsdLogProgram log_trace_program() {
  // maximize log(tr(X) + 1) s.t. tr(X) <= 1 on a 2x2 block
  PsdLogProgram p;
  p.block_dims = {2};
  conic::LogTerm t;
  t.weight = 1.0;
  t.mats = {Hermitian::identity(2)};
  t.offset = 1.0;
  p.log_terms.push_back(t);
  p.linear = {Hermitian()};
  conic::LinearIneq q;
  q.mats = {Hermitian::identity(2)};
  q.bound = 1.0;
  p.ineqs.push_back(q);
  return p;
}

}  // namespace

TEST_CASE("psd log solver on closed-form instances") {
  const std::vector<Hermitian> start = {Hermitian::identity(2, 0.25)};
  conic::SolveOptions opts;
  opts.tol = 1e-8;

  SUBCASE("log objective saturates the trace budget") {
    const auto sol = conic::solve_psd_log(log_trace_program(), start, opts);
    CHECK(sol.info.status == conic::SolveStatus::optimal);
    CHECK(sol.info.objective == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(sol.blocks[0].trace() == doctest::Approx(1.0).epsilon(1e-5));
  }

  SUBCASE("indefinite linear objective picks the positive eigendirection") {
    PsdLogProgram p;
    p.block_dims = {2};
    Hermitian l(2);
    l.set(0, 0, 1.0);
    l.set(1, 1, -1.0);
    p.linear = {l};
    conic::LinearIneq q;
    q.mats = {Hermitian::identity(2)};
    q.bound = 1.0;
    p.ineqs.push_back(q);
    const auto sol = conic::solve_psd_log(p, start, opts);
    CHECK(sol.info.objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.blocks[0](0, 0).real() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(sol.blocks[0](1, 1).real() == doctest::Approx(0.0).epsilon(1e-4));
  }
}

TEST_CASE("psd log solver matches the spectahedron oracle") {
  test::Rng rng(101);
  conic::SolveOptions opts;
  for (int rep = 0; rep < 50; ++rep) {
    PsdLogProgram p;
    p.block_dims = {2};
    const int n_logs = 1 + int(test::uniform(rng, 0, 1.999));
    for (int i = 0; i < n_logs; ++i) {
      conic::LogTerm t;
      t.weight = test::uniform(rng, 0.5, 2.0);
      t.mats = {test::random_psd(rng, 2, test::uniform(rng, 0.5, 2.0))};
      t.offset = test::uniform(rng, 0.5, 1.5);
      p.log_terms.push_back(t);
    }
    p.linear = {test::random_hermitian(rng, 2, 0.3)};
    conic::LinearIneq q;
    q.mats = {Hermitian::identity(2)};
    q.bound = 1.0;
    p.ineqs.push_back(q);

    const auto sol =
        conic::solve_psd_log(p, {Hermitian::identity(2, 0.25)}, opts);
    REQUIRE(sol.info.status == conic::SolveStatus::optimal);
    const double oracle = test::spectahedron_oracle_2x2(p, 1.0);
    CHECK(sol.info.objective == doctest::Approx(oracle).epsilon(1e-3));
    CHECK(sol.info.objective >= oracle - 1e-3);

    const auto feas = conic::check_feasible(p, sol.blocks, 1e-7);
    CHECK(feas.ok);
  }
}

TEST_CASE("psd log solver diagnostics") {
  const PsdLogProgram p = log_trace_program();

  SUBCASE("infeasible start is reported") {
    const auto sol = conic::solve_psd_log(p, {Hermitian::identity(2, 2.0)});
    CHECK(sol.info.status == conic::SolveStatus::infeasible_start);
  }
  SUBCASE("monotone barrier path and bit-identical logs") {
    conic::SolveOptions opts;
    opts.capture_log = true;
    const auto a = conic::solve_psd_log(p, {Hermitian::identity(2, 0.25)}, opts);
    const auto b = conic::solve_psd_log(p, {Hermitian::identity(2, 0.25)}, opts);
    CHECK(a.info.monotone_path);
    REQUIRE(a.info.log.size() == b.info.log.size());
    for (size_t i = 0; i < a.info.log.size(); ++i) {
      CHECK(a.info.log[i].objective == b.info.log[i].objective);
      CHECK(a.info.log[i].merit == b.info.log[i].merit);
      CHECK(a.info.log[i].step == b.info.log[i].step);
    }
    CHECK(a.info.objective == b.info.objective);
  }
}

TEST_CASE("waypoint solver on closed-form instances") {
  conic::SolveOptions opts;

  SUBCASE("ball extreme point") {
    WaypointProgram p;
    p.num_points = 1;
    p.objective = {Vec2(1, 0)};
    p.balls.push_back({0, -1, Vec2::Zero(), 1.0});
    const auto sol = conic::solve_waypoints(p, {Vec2::Zero()}, opts);
    CHECK(sol.points[0].x() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sol.points[0].y() == doctest::Approx(0.0).epsilon(1e-5));
  }

  SUBCASE("forced midpoint between anchors") {
    // one free point chained to (0,0) and (2,0) with unit steps: only (1,0)
    WaypointProgram p;
    p.num_points = 1;
    p.objective = {Vec2(0, 7)};  // objective must not matter
    p.balls.push_back({0, -1, Vec2(0, 0), 1.0});
    p.balls.push_back({0, -1, Vec2(-2, 0), 1.0});
    const auto sol = conic::solve_waypoints(p, {Vec2(1, 0)}, opts);
    CHECK((sol.points[0] - Vec2(1, 0)).norm() <= 1e-4);
    const auto feas = conic::check_feasible(p, sol.points, 1e-6);
    CHECK(feas.ok);
  }
}

TEST_CASE("waypoint solver matches the projected-gradient oracle") {
  test::Rng rng(211);
  conic::SolveOptions opts;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + int(test::uniform(rng, 0, 2.999));
    std::vector<Vec2> start;
    for (int i = 0; i < n; ++i) {
      start.emplace_back(test::uniform(rng, -1, 1), test::uniform(rng, -1, 1));
    }
    WaypointProgram p;
    p.num_points = n;
    for (int i = 0; i < n; ++i) {
      Vec2 dir(test::uniform(rng, -1, 1), test::uniform(rng, -1, 1));
      if (dir.norm() < 1e-6) dir = Vec2(1, 0);
      p.objective.push_back(dir.normalized());
      // anchor ball containing the start with slack
      const Vec2 center = start[size_t(i)] +
                          Vec2(test::uniform(rng, -0.3, 0.3),
                               test::uniform(rng, -0.3, 0.3));
      p.balls.push_back({i, -1, -center,
                         (start[size_t(i)] - center).norm() +
                             test::uniform(rng, 0.3, 1.0)});
    }
    for (int i = 1; i < n; ++i) {
      p.balls.push_back({i, i - 1, Vec2::Zero(),
                         (start[size_t(i)] - start[size_t(i - 1)]).norm() +
                             test::uniform(rng, 0.2, 0.8)});
    }
    if (rep % 2 == 0) {
      Vec2 normal(test::uniform(rng, -1, 1), test::uniform(rng, -1, 1));
      if (normal.norm() < 1e-6) normal = Vec2(0, 1);
      normal.normalize();
      p.halfplanes.push_back(
          {0, normal, normal.dot(start[0]) + test::uniform(rng, 0.2, 0.8)});
    }

    const auto sol = conic::solve_waypoints(p, start, opts);
    REQUIRE(sol.info.status == conic::SolveStatus::optimal);
    const double oracle = test::waypoint_oracle(p, start);
    CHECK(sol.info.objective == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(conic::check_feasible(p, sol.points, 1e-6).ok);
    // never worse than the start
    double at_start = 0.0;
    for (int i = 0; i < n; ++i) at_start += p.objective[size_t(i)].dot(start[size_t(i)]);
    CHECK(sol.info.objective >= at_start - 1e-9);
  }
}

TEST_CASE("waypoint solver keeps boundary starts usable") {
  // start exactly on the displacement boundary
  WaypointProgram p;
  p.num_points = 1;
  p.objective = {Vec2(0, 1)};
  p.balls.push_back({0, -1, Vec2(1, 0), 1.0});  // ||x - (-1,0)|| <= 1... shift adds
  const auto sol = conic::solve_waypoints(p, {Vec2(0, 0)}, {});
  CHECK(sol.info.status == conic::SolveStatus::optimal);
  CHECK(conic::check_feasible(p, sol.points, 1e-6).ok);
}

#include "scs/scenario.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace scs;

TEST_CASE("dB conversions round trip") {
  test::Rng rng(23);
  for (int rep = 0; rep < 500; ++rep) {
    const double w = std::pow(10.0, test::uniform(rng, -15, 3));
    CHECK(dbm_to_watts(watts_to_dbm(w)) == doctest::Approx(w).epsilon(1e-12));
    CHECK(db_to_linear(linear_to_db(w)) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("case-1 document loads the expected linear values") {
  const Scenario s = load_scenario(R"({
    "p_max_alice_dbm": 30, "p_max_jack_dbm": 25,
    "noise_dbm": -80, "pathloss_ref_db": -30, "gamma_sense_dbm": -20
  })");
  CHECK(s.p_max_alice == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.p_max_jack == doctest::Approx(0.31622776601683794).epsilon(1e-12));
  CHECK(s.noise_bob == doctest::Approx(1e-11).epsilon(1e-12));
  CHECK(s.noise_eve == doctest::Approx(1e-11).epsilon(1e-12));
  CHECK(s.pathloss_ref == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(s.gamma_sense == doctest::Approx(1e-5).epsilon(1e-12));
}

TEST_CASE("empty document equals the defaults") {
  const Scenario s = load_scenario("{}");
  const Scenario d = default_scenario();
  CHECK(s.p_max_alice == d.p_max_alice);
  CHECK(s.p_max_jack == d.p_max_jack);
  CHECK(s.resid_jam_bob == doctest::Approx(0.01));
  CHECK(s.resid_jam_eve == doctest::Approx(1.0));
  CHECK(s.bob_pos == Vec2(40, 60));
  CHECK(s.eve_pos == Vec2(60, 60));
  CHECK(s.targets.size() == 4);
  CHECK(s.slots_per_target == 2);
  CHECK(s.alt_alice == 120.0);
  CHECK(s.alt_jack == 100.0);
  CHECK(s.d_min == 20.0);
  CHECK(s.v_max == 20.0);
}

TEST_CASE("loading is deterministic") {
  const std::string doc = R"({"horizon_s": 20, "num_targets": 3, "tau_weight": 0.25})";
  CHECK(scenario_to_json(load_scenario(doc)) == scenario_to_json(load_scenario(doc)));
}

TEST_CASE("document round trips through its JSON dump") {
  Scenario s = default_scenario();
  s.horizon = 14;
  s.gamma_sense = 3e-6;
  s.solver.max_bcd_iters = 3;
  const Scenario back = load_scenario(scenario_to_json(s));
  CHECK(back.horizon == s.horizon);
  CHECK(back.gamma_sense == doctest::Approx(s.gamma_sense).epsilon(1e-15));
  CHECK(back.solver.max_bcd_iters == 3);
}

TEST_CASE("mission grid") {
  Scenario s = default_scenario();
  SUBCASE("case-1 numbers") {
    const MissionGrid g = mission_grid(s);
    CHECK(g.num_slots == 20);
    CHECK(g.sensing_slots == 8);
    CHECK(g.comm_slots == 20);
    CHECK(g.max_step == doctest::Approx(10.0));
  }
  SUBCASE("single target, single slot") {
    s.targets = {{50, 10}};
    s.slots_per_target = 1;
    CHECK(mission_grid(s).sensing_slots == 1);
  }
  SUBCASE("longer horizon") {
    s.horizon = 20;
    CHECK(mission_grid(s).num_slots == 40);
  }
  SUBCASE("non-integer ratio is rejected") {
    s.horizon = 10.3;
    CHECK_THROWS_AS(mission_grid(s), ValidationError);
  }
}

TEST_CASE("every scenario invariant rejects with the field name") {
  auto expect_reject = [](const char* json_text, const char* field) {
    try {
      load_scenario(json_text);
      FAIL_CHECK("accepted: " << json_text);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.field()).find(field) != std::string::npos);
    }
  };
  expect_reject(R"({"horizon_s": 10.3})", "horizon");
  expect_reject(R"({"slot_len_s": 0})", "slot_len");
  expect_reject(R"({"num_antennas": 0})", "num_antennas");
  expect_reject(R"({"spacing_ratio": 0})", "spacing_ratio");
  expect_reject(R"({"p_max_alice_w": 0})", "p_max_alice");
  expect_reject(R"({"p_max_jack_w": -1})", "p_max_jack");
  expect_reject(R"({"noise_bob_w": 0})", "noise_bob");
  expect_reject(R"({"noise_eve_w": -1e-9})", "noise_eve");
  expect_reject(R"({"pathloss_ref_lin": 0})", "pathloss_ref");
  expect_reject(R"({"gamma_sense_w": 0})", "gamma_sense");
  expect_reject(R"({"resid_jam_bob_lin": 1.5})", "resid_jam_bob");
  expect_reject(R"({"resid_jam_eve_lin": -0.1})", "resid_jam_eve");
  expect_reject(R"({"resid_sense_bob_lin": 2})", "resid_sense_bob");
  expect_reject(R"({"resid_sense_eve_lin": -1})", "resid_sense_eve");
  expect_reject(R"({"tau_weight": 1.2})", "tau_weight");
  expect_reject(R"({"alt_alice_m": 0})", "alt_alice");
  expect_reject(R"({"alt_jack_m": -5})", "alt_jack");
  expect_reject(R"({"v_max_mps": 0})", "v_max");
  expect_reject(R"({"d_min_m": -1})", "d_min");
  expect_reject(R"({"slots_per_target": 6})", "slots_per_target");  // 24 > 20
  expect_reject(R"({"jack_start_m": [500, 0]})", "jack_start");
  expect_reject(R"({"jack_end_m": [0, 0], "alt_jack_m": 119})", "jack_end");
  expect_reject(R"({"solver": {"shrink_alice": 1.0}})", "shrink_alice");
  expect_reject(R"({"solver": {"bcd_tol": 0}})", "bcd_tol");
  expect_reject(R"({"solver": {"rank_one_tol": 1.5}})", "rank_one_tol");
  expect_reject(R"({"solver": {"max_bcd_iters": 0}})", "max_bcd_iters");
}

TEST_CASE("parse and schema errors") {
  CHECK_THROWS_AS(load_scenario("{not json"), std::runtime_error);
  CHECK_THROWS_AS(load_scenario(R"({"mystery_field": 1})"), ValidationError);
  CHECK_THROWS_AS(load_scenario(R"({"p_max_alice_dbm": 30, "p_max_alice_w": 1})"),
                  ValidationError);
  CHECK_THROWS_AS(load_scenario(R"({"noise_dbm": -80, "noise_bob_w": 1e-11})"),
                  ValidationError);
  CHECK_THROWS_AS(load_scenario(R"({"targets_m": [[1,2]], "num_targets": 2})"),
                  ValidationError);
}

#include <doctest.h>

#include "holab/catalog.hpp"
#include "holab/report.hpp"
#include "holab/run.hpp"

using namespace holab;

TEST_CASE("every builtin scenario round-trips through JSON") {
  for (const auto& name : builtin_names()) {
    Scenario original = make_builtin(name);
    Json j1 = scenario_to_json(original);
    Scenario reparsed = scenario_from_json(j1);
    Json j2 = scenario_to_json(reparsed);
    CHECK(dump_deterministic(j1) == dump_deterministic(j2));
  }
  CHECK_THROWS_AS(make_builtin("no_such_scenario"), schema_error);
}

TEST_CASE("schema validation rejects malformed scenarios") {
  CHECK_THROWS_AS(parse_scenario_text("this is not json"), schema_error);
  CHECK_THROWS_AS(parse_scenario_text("{}"), schema_error);
  CHECK_THROWS_AS(parse_scenario_text(R"({"name":"x","kind":"nope"})"), schema_error);
  // lie_pair with both realizations at once
  CHECK_THROWS_AS(parse_scenario_text(R"({
    "name":"x","kind":"lie_pair",
    "ambient":{"matrices":[[[0]]]},
    "structure_constants":{"dim":1,"tensor":[[[0]]]}
  })"),
                  schema_error);
  // foliation with inconsistent box
  CHECK_THROWS_AS(parse_scenario_text(R"({
    "name":"x","kind":"foliation","variant":"ode_graph","dim":2,
    "box":{"lo":[0],"hi":[1]},
    "f":["y"],"base":[0,0],"paths":[{"from":0,"to":1}]
  })"),
                  schema_error);
  // ragged matrix
  CHECK_THROWS_AS(parse_scenario_text(R"({
    "name":"x","kind":"lie_pair",
    "ambient":{"matrices":[[[1,0],[0]]]},
    "sub":{"matrices":[[[1,0],[0,1]]]}
  })"),
                  schema_error);
}

TEST_CASE("run_scenario: sl2_borel bott data and checks") {
  RunResult res = run_scenario(make_builtin("sl2_borel"), "bott");
  CHECK(res.pass);
  // bott(H) on the one-dimensional quotient is the scalar -2.
  double b00 = res.report["data"]["bott"][0][0][0].get<double>();
  CHECK(b00 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(res.report["checks"].size() >= 2);
  CHECK(res.report["pass"].get<bool>());
}

TEST_CASE("run_scenario: heisenberg_center normality reports (true, true)") {
  RunResult res = run_scenario(make_builtin("heisenberg_center"), "normality");
  CHECK(res.pass);
  CHECK(res.report["data"]["normality"]["ideal"].get<bool>());
  CHECK(res.report["data"]["normality"]["chi_trivial"].get<bool>());
}

TEST_CASE("run_scenario: sl2_borel normality reports (false, false) with witness") {
  RunResult res = run_scenario(make_builtin("sl2_borel"), "normality");
  CHECK(res.pass);  // consistency holds even though both flags are false
  CHECK_FALSE(res.report["data"]["normality"]["ideal"].get<bool>());
  CHECK_FALSE(res.report["data"]["normality"]["chi_trivial"].get<bool>());
  CHECK(res.report["data"]["normality"]["witness_dev"].get<double>() > 1e-3);
}

TEST_CASE("run_scenario: full pass over every builtin") {
  for (const auto& name : builtin_names()) {
    RunResult res = run_scenario(make_builtin(name), "all");
    INFO(name);
    CHECK(res.pass);
  }
}

TEST_CASE("run_scenario: command/kind mismatches raise schema errors") {
  CHECK_THROWS_AS(run_scenario(make_builtin("sl2_borel"), "foliation"), schema_error);
  CHECK_THROWS_AS(run_scenario(make_builtin("fol_linear"), "bott"), schema_error);
  CHECK_THROWS_AS(run_scenario(make_builtin("sl2_borel"), "frobnicate"), schema_error);
}

TEST_CASE("structure-constants-only scenarios run the algebra-level commands") {
  // sl(2,R) Borel pair, given abstractly.
  const std::string text = R"({
    "name": "sl2_borel_abstract",
    "kind": "lie_pair",
    "structure_constants": {
      "dim": 3,
      "tensor": [
        [[0,0,0],[0,2,0],[0,0,-2]],
        [[0,-2,0],[0,0,0],[1,0,0]],
        [[0,0,2],[-1,0,0],[0,0,0]]
      ]
    },
    "sub": {"coords": [[1,0],[0,1],[0,0]]}
  })";
  Scenario scn = parse_scenario_text(text);
  RunResult res = run_scenario(scn, "bott");
  CHECK(res.pass);
  CHECK(res.report["data"]["bott"][0][0][0].get<double>() == doctest::Approx(-2.0));

  RunResult diff = run_scenario(scn, "differentiate");
  CHECK(diff.pass);

  // Group-side commands need matrices.
  CHECK_THROWS_AS(run_scenario(scn, "holonomy"), schema_error);
  CHECK_THROWS_AS(run_scenario(scn, "rightinv"), schema_error);

  // 'all' runs what applies and records the skip.
  RunResult all = run_scenario(scn, "all");
  CHECK(all.pass);
  REQUIRE(all.report["skipped"].size() == 1);
}

TEST_CASE("scenario validation failures are schema errors") {
  // span(E, F) in sl2 is not closed under the bracket.
  const std::string text = R"({
    "name": "bad_sub",
    "kind": "lie_pair",
    "ambient": {"name": "sl2", "matrices": [[[1,0],[0,-1]], [[0,1],[0,0]], [[0,0],[1,0]]]},
    "sub": {"matrices": [[[0,1],[0,0]], [[0,0],[1,0]]]}
  })";
  CHECK_THROWS_AS(run_scenario(parse_scenario_text(text), "bott"), schema_error);

  // Non-involutive spanned foliation.
  const std::string fol = R"({
    "name": "bad_fol",
    "kind": "foliation",
    "variant": "spanned",
    "dim": 3,
    "box": {"lo": [-1,-1,0.5], "hi": [1,1,2]},
    "fields": [["1","0","y2"],["0","1","x*y2"]],
    "paths": [{"word": [[0, 0.5]]}],
    "slice0": {"base": [0,0,1], "dirs": [[0],[0],[1]]},
    "slice1": {"base": [0.5,0,1.6487212707001282], "dirs": [[0],[0],[1]]}
  })";
  CHECK_THROWS_AS(run_scenario(parse_scenario_text(fol), "foliation"), schema_error);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  RunOptions opts;
  opts.seed = 0;
  RunResult a = run_scenario(make_builtin("sl2_borel"), "all", opts);
  RunResult b = run_scenario(make_builtin("sl2_borel"), "all", opts);
  CHECK(dump_deterministic(a.report) == dump_deterministic(b.report));
  CHECK(a.text == b.text);

  RunOptions other;
  other.seed = 12345;
  RunResult c = run_scenario(make_builtin("sl2_borel"), "all", other);
  CHECK(c.pass);  // different draws, same verdicts
}

TEST_CASE("tol-scale loosens or tightens the gates") {
  RunOptions strict;
  strict.tol_scale = 1e-12;  // absurdly tight: discretization error now fails
  RunResult res = run_scenario(make_builtin("sl2_borel"), "differentiate", strict);
  CHECK_FALSE(res.pass);

  RunOptions loose;
  loose.tol_scale = 1e6;
  CHECK(run_scenario(make_builtin("sl2_borel"), "differentiate", loose).pass);
}

TEST_CASE("deterministic dump formats floats at 17 significant digits") {
  Json j;
  j["value"] = 0.1;
  j["third"] = 1.0 / 3.0;
  j["int"] = 42;
  std::string s = dump_deterministic(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("\"int\": 42") != std::string::npos);
  // Keys are emitted in sorted order.
  CHECK(s.find("\"int\"") < s.find("\"third\""));
  CHECK(s.find("\"third\"") < s.find("\"value\""));
}

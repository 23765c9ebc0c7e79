#include "doctest.h"

#include "quadrep/cli.hpp"

using namespace quadrep;

TEST_CASE("rationals") {
  CHECK(rational_from_json(Json("3/4"), "$") == Rational(3, 4));
  CHECK(rational_from_json(Json(-5), "$") == -5);
  CHECK_THROWS_AS(rational_from_json(Json(1.5), "$"), SchemaError);
  CHECK(to_json(Rational(-7, 2)) == Json("-7/2"));
}

TEST_CASE("schema errors carry the path") {
  try {
    coset_from_json(Json::parse(R"({"gram": [[1, 0, 0], [0, 1, "x"], [0, 0, 1]]})"));
    FAIL("no error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("$.gram[1][2]") != std::string::npos);
  }
  CHECK_THROWS_AS(coset_from_json(Json::parse(R"({"basis": []})")), SchemaError);
  CHECK_THROWS_AS(coset_from_json(Json::parse(R"({"gram": [[1, 2], [0, 1]]})")), SchemaError);
  CHECK_THROWS_AS(watson_from_json(Json::parse(R"({"gram": [[1, 0], [0, 1]], "poly": [1]})")), SchemaError);
  CHECK_THROWS_AS(watson_from_json(Json::parse(R"({"gram": [[1,0,0],[0,1,0],[0,0,1]], "poly": [1], "domain": "R"})")),
                  SchemaError);
}

TEST_CASE("round trips are idempotent") {
  auto j = Json::parse(R"({"gram": [[2, 1, 0], [1, 2, 0], [0, 0, "3/2"]], "u0": ["1/2", 0, "1/3"]})");
  Json once = coset_to_json(coset_from_json(j));
  Json twice = coset_to_json(coset_from_json(once));
  CHECK(once == twice);
  auto w = Json::parse(R"({"gram": [[1,0,0],[0,1,0],[0,0,1]], "poly": [7, 8], "domain": "Z"})");
  Json w1 = watson_to_json(watson_from_json(w));
  CHECK(watson_to_json(watson_from_json(w1)) == w1);
  RunOptions opt;
  auto r = run_task("decide", w, Json::object(), opt);
  CHECK(r.exit_code == kExitNo);
  CHECK(r.output["status"] == "locally_obstructed");
  CHECK(r.output["certificate"]["place"] == "2");
  CHECK(Json::parse(r.output.dump()) == r.output);
}

TEST_CASE("exit codes") {
  RunOptions opt;
  Json z3 = Json::parse(R"({"gram": [[1,0,0],[0,1,0],[0,0,1]]})");
  CHECK(run_task("localrep", z3, {{"prime", 2}, {"alpha", 7}}, opt).exit_code == kExitNo);
  CHECK(run_task("localrep", z3, {{"prime", 2}, {"alpha", 6}}, opt).exit_code == kExitOk);
  CHECK(run_task("localrep", z3, {{"prime", 4}, {"alpha", 6}}, opt).exit_code == kExitInput);
  CHECK(run_task("spinor-count", z3, {}, opt).output["count"] == 1);
  CHECK(run_task("nonsense", z3, {}, opt).exit_code == kExitInput);
  CHECK(run_task("genus", Json::parse(R"({"gram": 5})"), {{"alpha", 1}}, opt).exit_code == kExitInput);
}

TEST_CASE("dotted paths") {
  Json j = Json::parse(R"({"a": {"b": [1, {"c": 2}]}})");
  CHECK(json_at(j, "a.b.1.c") == 2);
  CHECK(json_at(j, "a.x").is_null());
}

#include <doctest.h>

#include "pipeline.hpp"

#include <cmath>

using namespace lcw;
using namespace lcw::cli;
using io::Json;

namespace {

std::string geometry(const std::string& name) { return std::string(LCW_GEOMETRY_DIR) + "/" + name + ".json"; }
std::string data(const std::string& name) { return std::string(LCW_TEST_DATA_DIR) + "/" + name + ".json"; }

const Json* find_check(const Json& report, const std::string& name) {
  for (const auto& c : report["validation"]["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("check accepts the shipped geometries") {
  for (const char* name : {"flat-t2", "nc-torus-1-3", "nc-torus-1-5", "fuzzy-q5-flat", "fuzzy-q5-curved", "grid-t3-curved"}) {
    CAPTURE(name);
    Result r = run("check", geometry(name), Options{});
    CHECK(r.exit_code == kOk);
    CHECK(r.report["command"] == "check");
    CHECK(r.report["validation"]["passed"] == true);
    CHECK_FALSE(r.report.contains("timings_ms"));
  }
}

TEST_CASE("check flags a non-idempotent Gram matrix") {
  Result r = run("check", data("bad-gram"), Options{});
  CHECK(r.exit_code == kMathFailure);
  const Json* c = find_check(r.report, "frame projection");
  REQUIRE(c);
  CHECK((*c)["passed"] == false);
}

TEST_CASE("input errors exit with code 2") {
  for (const std::string& path : {data("malformed"), std::string("/nonexistent.json")}) {
    Result r = run("check", path, Options{});
    CHECK(r.exit_code == kInputError);
    CHECK(r.report.begin().key() == "command");
    CHECK(r.report.contains("error"));
  }
  Options o;
  o.method = "magic";
  CHECK(run("connect", geometry("flat-t2"), o).exit_code == kInputError);
  CHECK(run("oracle", geometry("flat-t2"), Options{}).exit_code == kInputError);
  CHECK(run("frobnicate", geometry("flat-t2"), Options{}).exit_code == kInputError);
  CHECK_THROWS_AS(parse_point("1,two,3"), io::InputError);
  CHECK(parse_point("0, 1.5,3") == std::vector<double>{0.0, 1.5, 3.0});
}

TEST_CASE("connect on flat geometries") {
  for (const char* name : {"flat-t2", "nc-torus-1-3", "nc-torus-1-5", "fuzzy-q5-flat"}) {
    CAPTURE(name);
    Result r = run("connect", geometry(name), Options{});
    CHECK(r.exit_code == kOk);
    const Json& c = r.report["connection"];
    CHECK(c["A_zero"] == true);
    CHECK(c["A"].empty());
    CHECK(r.report["certification"]["passed"] == true);
    CHECK(r.report["certification"]["exact"] == true);
    CHECK(r.report["torsion"]["zero"] == true);
    CHECK(r.report["curvature"]["zero"] == true);
  }
}

TEST_CASE("connect on the curved fuzzy geometry with every method") {
  for (const char* method : {"auto", "closed", "series"}) {
    CAPTURE(method);
    Options o;
    o.method = method;
    Result r = run("connect", geometry("fuzzy-q5-curved"), o);
    CHECK(r.exit_code == kOk);
    CHECK(r.report["connection"]["A_zero"] == false);
    CHECK(r.report["certification"]["passed"] == true);
  }
  Result a = run("connect", geometry("fuzzy-q5-curved"), Options{});
  CHECK(a.report["connection"]["series_agrees"] == true);
  Options g;
  g.method = "grassmann";
  Result r = run("connect", geometry("fuzzy-q5-curved"), g);
  CHECK(r.exit_code == kMathFailure);
  CHECK(r.report["certification"]["hermitian"] == true);
  CHECK(r.report["certification"]["torsion_free"] == false);
}

TEST_CASE("projections") {
  Result r = run("projections", geometry("fuzzy-q5-curved"), Options{});
  CHECK(r.exit_code == kOk);
  const Json& p = r.report["projections"];
  CHECK(p["s3_relation"] == true);
  CHECK(p["concordant"] == true);
  CHECK(p["friedrichs_angle"].get<double>() < 1.0);

  Options it;
  it.method = "iterative";
  Result i = run("projections", geometry("fuzzy-q5-curved"), it);
  CHECK(i.exit_code == kOk);
  CHECK(i.report["projections"]["method"] == "iterative");
  CHECK(std::abs(i.report["projections"]["pi_rank"].get<double>() - p["pi_rank"].get<double>()) < 1e-8);

  it.max_iter = 1;
  Result n = run("projections", geometry("fuzzy-q5-curved"), it);
  CHECK(n.exit_code == kNonConvergence);
  CHECK(n.report.contains("residual"));
}

TEST_CASE("oracle spot values") {
  Options o;
  o.points = {{0.0, 0.0, M_PI / 2}};
  Result r = run("oracle", geometry("grid-t3-curved"), o);
  REQUIRE(r.exit_code == kOk);
  const Json& gamma = r.report["points"][0]["christoffel"];
  CHECK(gamma[2][0][0].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gamma[0][0][2].get<double>() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("junk") {
  for (const char* name : {"flat-t2", "nc-torus-1-5", "fuzzy-q5-curved"}) {
    CAPTURE(name);
    Result r = run("junk", geometry(name), Options{});
    CHECK(r.exit_code == kOk);
    CHECK(r.report["passed"] == true);
    for (const auto& g : r.report["generators"]) CHECK(g["in_image_of_psi"] == true);
  }
}

TEST_CASE("compare against the classical oracle") {
  Result r = run("compare", geometry("grid-t3-curved"), Options{});
  CHECK(r.exit_code == kOk);
  CHECK(r.report["passed"] == true);
  CHECK(r.report["connection"]["max_abs"].get<double>() < 1e-8);
  CHECK(r.report["curvature"]["max_abs"].get<double>() < 1e-8);
  CHECK(run("compare", geometry("fuzzy-q5-curved"), Options{}).exit_code == kInputError);
}

TEST_CASE("reports are deterministic and timings are opt-in") {
  Result a = run("connect", geometry("fuzzy-q5-curved"), Options{});
  Result b = run("connect", geometry("fuzzy-q5-curved"), Options{});
  CHECK(a.report.dump(2) == b.report.dump(2));
  Options t;
  t.timings = true;
  Result c = run("connect", geometry("fuzzy-q5-curved"), t);
  REQUIRE(c.report.contains("timings_ms"));
  c.report.erase("timings_ms");
  CHECK(c.report.dump(2) == a.report.dump(2));
}

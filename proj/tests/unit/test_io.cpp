#include <doctest.h>

#include "../support/random_elements.hpp"
#include "../support/sample_geometries.hpp"
#include "lcw/io.hpp"
#include "lcw/levi_civita.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

using namespace lcw;
using io::Json;

namespace {

std::string geometry_path(const std::string& name) { return std::string(LCW_GEOMETRY_DIR) + "/" + name + ".json"; }

Json minimal_laurent() {
  return Json::parse(R"({
    "name": "t",
    "backend": "laurent",
    "theta": "1/5",
    "presentation": {"inverse_metric": [["1", "0"], ["0", "1"]], "expansion": [["1", "0"], ["0", "1"]]},
    "psi": "sigma-theta"
  })");
}

}  // namespace

TEST_CASE("shipped geometry documents load and validate") {
  for (const char* name : {"flat-t2", "nc-torus-1-3", "nc-torus-1-5", "fuzzy-q5-flat", "fuzzy-q5-curved", "grid-t3-curved"}) {
    CAPTURE(name);
    io::GeometrySpec spec = io::load_geometry(geometry_path(name));
    GeometryPtr g = io::build(spec);
    CHECK(g->name == name);
    CHECK(validate(*g).passed());
  }
}

TEST_CASE("every shipped document is listed") {
  size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(LCW_GEOMETRY_DIR)) n += e.path().extension() == ".json";
  CHECK(n == 6);
}

TEST_CASE("documents reproduce the programmatic sample geometries") {
  GeometryPtr doc = io::build(io::load_geometry(geometry_path("fuzzy-q5-curved")));
  GeometryPtr ref = samples::fuzzy_curved();
  REQUIRE(doc->frame->size() == ref->frame->size());
  CHECK(io::encode_tensor(compute_W(*doc).W) == io::encode_tensor(compute_W(*ref).W));
  CHECK(io::encode_tensor(quantum_metric(*doc)) == io::encode_tensor(quantum_metric(*ref)));

  io::GeometrySpec grid = io::load_geometry(geometry_path("grid-t3-curved"));
  REQUIRE(grid.metric);
  CHECK(grid.metric->is_diagonal());
  CHECK(grid.tolerance == doctest::Approx(1e-10));
  const std::vector<double> x = {0.0, 0.0, M_PI / 2};
  CHECK(std::abs(grid.metric->entry(0, 0).value(x) - Complex(4.0, 0.0)) < 1e-14);
  CHECK(std::abs(grid.metric->entry(1, 1).value(x) - Complex(6.25, 0.0)) < 1e-14);
}

TEST_CASE("scalar decoding") {
  AlgebraPtr ex = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  AlgebraPtr ap = Algebra::fuzzy(5, 1, FieldKind::approx);
  CHECK(io::decode_scalar(ex, Json("3/4")) == ex->from_rational(Rational(3, 4)));
  CHECK(io::decode_scalar(ex, Json(-2)) == ex->from_int(-2));
  CHECK(io::decode_scalar(ex, Json::parse(R"({"re": "1/2", "im": "-1"})")) ==
        ex->from_rational(Rational(1, 2)) - ex->imag_unit());
  CHECK(io::decode_scalar(ap, Json::parse("[0.5, -1.5]")) == Scalar(Complex(0.5, -1.5)));
  CHECK(io::decode_scalar(ap, Json(0.25)) == Scalar(Complex(0.25, 0.0)));
  CHECK_THROWS_AS(io::decode_scalar(ex, Json(0.25)), io::InputError);
  CHECK_THROWS_AS(io::decode_scalar(ex, Json("1/0")), io::InputError);
  CHECK_THROWS_AS(io::decode_scalar(ex, Json("three")), io::InputError);
  CHECK_THROWS_AS(io::decode_scalar(ap, Json::parse(R"({"zeta": ["1"]})")), io::InputError);
}

TEST_CASE("scalars and elements round trip") {
  std::mt19937 rng(71);
  AlgebraPtr ex = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  Scalar z = ex->lambda_power(3) * ex->from_rational(Rational(-7, 3)) + ex->imag_unit();
  Json j = io::encode_scalar(z);
  CHECK(j.contains("zeta"));
  CHECK(io::decode_scalar(ex, j) == z);
  CHECK(io::encode_scalar(ex->from_rational(Rational(5, 6))) == Json("5/6"));
  for (const auto& a : {ex, Algebra::fuzzy(5, 2, FieldKind::exact), Algebra::laurent(Rational(0), FieldKind::exact)}) {
    for (int k = 0; k < 10; ++k) {
      Element e = samples::random_element(a, rng);
      CHECK(io::decode_element(a, io::encode_element(e)) == e);
    }
  }
}

TEST_CASE("element decoding") {
  AlgebraPtr ex = Algebra::laurent(Rational(0), FieldKind::exact);
  Element e = io::decode_element(ex, Json::parse(R"([{"deg": [1, -2], "c": "2"}, {"deg": [0, 0], "c": 1}])"));
  CHECK(e == samples::mono(ex, 1, -2, 2) + samples::mono(ex, 0, 0, 1));
  CHECK(io::decode_element(ex, Json("1/2")) == samples::mono(ex, 0, 0, Rational(1, 2)));
  CHECK_THROWS_AS(io::decode_element(ex, Json::parse(R"([{"deg": [1], "c": "2"}])")), io::InputError);

  AlgebraPtr grid = Algebra::grid({8, 8});
  Element g = io::decode_element(grid, Json::parse(R"([{"k": [1, 0], "c": 0.5}, {"k": [-1, 0], "c": 0.5}])"));
  auto sh = grid->grid_shape();
  for (size_t p = 0; p < sh->points(); ++p) CHECK(std::abs(g.value_at(p) - std::cos(sh->coordinate(p, 0))) < 1e-14);
  CHECK_THROWS_AS(io::decode_element(grid, Json::parse(R"([{"k": [1, 0, 0], "c": 1}])")), io::InputError);
}

TEST_CASE("tensor encoding lists nonzero coordinates in order") {
  auto g = samples::flat_torus(Rational(0));
  TensorElement t = TensorElement::basis(g->frame, {1, 0}, samples::mono(g->algebra, 0, 0, 3)) +
                    TensorElement::basis(g->frame, {0, 1}, samples::mono(g->algebra, 1, 0, 1));
  Json j = io::encode_tensor(t);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["index"] == Json::parse("[0, 1]"));
  CHECK(j[1]["index"] == Json::parse("[1, 0]"));
  CHECK(j[1]["c"] == Json::parse(R"([{"deg": [0, 0], "c": "3"}])"));
  CHECK(io::encode_tensor(TensorElement(g->frame, 2)).empty());
}

TEST_CASE("non-finite numbers stay valid JSON") {
  CHECK(io::number(1.5) == Json(1.5));
  CHECK(io::number(std::numeric_limits<double>::infinity()).is_string());
  CHECK(io::number(std::nan("")).is_string());
}

TEST_CASE("document errors") {
  CHECK_NOTHROW(io::build(io::parse_geometry(minimal_laurent())));

  Json unknown = minimal_laurent();
  unknown["colour"] = "blue";
  CHECK_THROWS_WITH_AS(io::parse_geometry(unknown), doctest::Contains("colour"), io::InputError);

  Json nested = minimal_laurent();
  nested["presentation"]["extra"] = 1;
  CHECK_THROWS_AS(io::parse_geometry(nested), io::InputError);

  Json backend = minimal_laurent();
  backend["backend"] = "sphere";
  CHECK_THROWS_AS(io::parse_geometry(backend), io::InputError);

  Json theta = minimal_laurent();
  theta["theta"] = "x/5";
  CHECK_THROWS_AS(io::parse_geometry(theta), io::InputError);

  Json ragged = minimal_laurent();
  ragged["presentation"]["expansion"] = Json::parse(R"([["1", "0"], ["0"]])");
  CHECK_THROWS_AS(io::parse_geometry(ragged), io::InputError);

  Json psi = minimal_laurent();
  psi["psi"] = "flip";
  CHECK_THROWS_AS(io::parse_geometry(psi), io::InputError);

  Json tol = minimal_laurent();
  tol["tolerance"] = -1.0;
  CHECK_THROWS_AS(io::parse_geometry(tol), io::InputError);

  Json nothing = Json::parse(R"({"name": "t", "backend": "laurent", "theta": "0"})");
  CHECK_THROWS_AS(io::build(io::parse_geometry(nothing)), io::InputError);

  Json metric = minimal_laurent();
  metric["metric"] = Json::parse(R"({"diagonal": [1, 1]})");
  CHECK_THROWS_AS(io::parse_geometry(metric), io::InputError);

  Json grid_q = Json::parse(R"({"name": "g", "backend": "grid", "grid": {"sizes": [1]}, "metric": {"diagonal": [1]}})");
  CHECK_THROWS_AS(io::parse_geometry(grid_q), io::InputError);

  Json fuzzy = Json::parse(R"({"name": "f", "backend": "fuzzy", "theta": "1/5", "q": 7,
    "presentation": {"inverse_metric": [["1", "0"], ["0", "1"]], "expansion": [["1", "0"], ["0", "1"]]}})");
  CHECK_THROWS_AS(io::parse_geometry(fuzzy), io::InputError);

  CHECK_THROWS_AS(io::parse_geometry_text("{ not json"), io::InputError);
  CHECK_THROWS_AS(io::load_geometry("/nonexistent/geometry.json"), io::InputError);
}

TEST_CASE("explicit frame data overrides derived data and is validated") {
  // flat torus with an explicit, non-idempotent Gram matrix
  Json doc = minimal_laurent();
  doc["frame"] = Json::parse(R"({"gram": [["2", "0"], ["0", "1"]]})");
  GeometryPtr g = io::build(io::parse_geometry(doc));
  ValidationReport r = validate(*g);
  CHECK_FALSE(r.passed());
  bool saw = false;
  for (const auto& c : r.checks)
    if (c.name == "frame projection") {
      saw = true;
      CHECK_FALSE(c.passed);
    }
  CHECK(saw);
}

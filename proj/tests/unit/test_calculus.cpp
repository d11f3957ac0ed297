#include <doctest.h>

#include "../support/random_elements.hpp"
#include "../support/sample_geometries.hpp"

#include <cmath>

using namespace lcw;
using samples::random_element;
using samples::random_tensor;

namespace {

std::vector<GeometryPtr> exact_geometries() {
  return {samples::flat_torus(Rational(0)), samples::flat_torus(Rational(1, 3)), samples::flat_torus(Rational(1, 5)),
          samples::fuzzy_flat(5, 1), samples::fuzzy_curved(), samples::fuzzy_overcomplete()};
}

bool check_passed(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.passed;
  FAIL("no check named " << name);
  return false;
}

}  // namespace

TEST_CASE("shipped sample geometries validate exactly") {
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    ValidationReport r = validate(*g);
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
      CHECK(c.exact);
    }
  }
  ValidationReport r = validate(*samples::grid_curved(16));
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
    CHECK(c.residual < 1e-10);
  }
}

TEST_CASE("closed frames are detected") {
  CHECK(samples::flat_torus(Rational(1, 5))->closed);
  CHECK(samples::fuzzy_flat(5, 1)->closed);
  CHECK_FALSE(samples::fuzzy_curved()->closed);
  CHECK_FALSE(samples::grid_curved(8)->closed);
}

TEST_CASE("perturbed psi fails validation") {
  auto g = samples::fuzzy_curved();
  Geometry bad = *g;
  std::vector<ModuleOperator::Row> rows(g->frame->dimension(2));
  rows[0] = {{1, Element::constant(g->algebra, g->algebra->from_rational(Rational(1, 100)))}};
  bad.psi = g->psi + ModuleOperator::from_canonical(g->frame, 2, rows);
  ValidationReport r = validate(bad);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(check_passed(r, "psi idempotent"));
}

TEST_CASE("d of a monomial on the flat torus") {
  auto g = samples::flat_torus(Rational(0));
  const AlgebraPtr& a = g->algebra;
  Element u = samples::mono(a, 1, 0, 1);
  TensorElement du = differential0(*g, u);
  CHECK(du == TensorElement::basis(g->frame, {0}, u * a->imag_unit()));
  CHECK(differential0(*g, Element::constant(a, a->one())).is_zero());
}

TEST_CASE("d intertwines the star with the dagger") {
  std::mt19937 rng(31);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 0; k < 10; ++k) {
      Element b = random_element(g->algebra, rng);
      CHECK(differential0(*g, b.adjoint()) == -tensor_dagger(differential0(*g, b)));
      Element r = b + b.adjoint();
      CHECK(tensor_dagger(differential0(*g, r)) == -differential0(*g, r));
    }
  }
}

TEST_CASE("d satisfies the Leibniz rule") {
  std::mt19937 rng(32);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    Element a = random_element(g->algebra, rng), b = random_element(g->algebra, rng);
    CHECK(differential0(*g, a * b) == differential0(*g, a) * b + left_mul(a, differential0(*g, b)));
  }
}

TEST_CASE("d squares to zero on 50 random elements") {
  std::mt19937 rng(33);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 0; k < 50; ++k) {
      Element b = random_element(g->algebra, rng);
      CHECK(exterior_d(*g, differential0(*g, b)).is_zero());
    }
  }
  auto g = samples::grid_curved(16);
  for (int k = 0; k < 50; ++k) {
    Element b = random_element(g->algebra, rng);
    CHECK(near_zero(exterior_d(*g, differential0(*g, b)), 1e-10));
  }
}

TEST_CASE("exterior derivative lands in two-forms and commutes with dagger") {
  std::mt19937 rng(34);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    ModuleOperator l2 = lambda2_projection(*g);
    TensorElement x = random_tensor(g->frame, 1, rng);
    TensorElement dx = exterior_d(*g, x);
    CHECK(l2.apply(dx) == dx);
    CHECK(exterior_d(*g, tensor_dagger(x)) == tensor_dagger(dx));
  }
}

TEST_CASE("closed frames have closed basis forms") {
  auto g = samples::flat_torus(Rational(1, 5));
  for (int j = 0; j < g->frame->size(); ++j) CHECK(exterior_d(*g, TensorElement::basis(g->frame, {j})).is_zero());
}

TEST_CASE("exterior derivative of a warped grid form") {
  // ω_x = f dx with f = 2 + cos z: d ω_x = ½ f'(dz⊗dx - dx⊗dz) = ½ (f'/f)(ω_z⊗ω_x - ω_x⊗ω_z)
  auto g = samples::grid_curved(32);
  auto sh = g->algebra->grid_shape();
  std::vector<Complex> h(sh->points());
  for (size_t p = 0; p < h.size(); ++p) {
    double z = sh->coordinate(p, 2);
    h[p] = -0.5 * std::sin(z) / (2 + std::cos(z));
  }
  Element he = Element::from_grid(g->algebra, GridFunction::from_samples(sh, h));
  TensorElement expected =
      TensorElement::basis(g->frame, {2, 0}, he) - TensorElement::basis(g->frame, {0, 2}, he);
  TensorElement got = exterior_d(*g, TensorElement::basis(g->frame, {0}));
  CHECK((got - expected).max_abs() < 1e-12);
}

TEST_CASE("quantum metric is central, real and reproduces the inner product") {
  std::mt19937 rng(35);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    TensorElement gm = quantum_metric(*g);
    CHECK(tensor_dagger(gm) == gm);
    for (int k = 0; k < 5; ++k) {
      Element b = random_element(g->algebra, rng);
      CHECK(left_mul(b, gm) == gm * b);
      TensorElement x = random_tensor(g->frame, 1, rng), y = random_tensor(g->frame, 1, rng);
      CHECK(inner_product(gm, tensor(x, y)) == inner_product(tensor_dagger(x), y));
    }
  }
}

TEST_CASE("orthonormal anti-real frame has G = -sum of squares") {
  auto g = samples::flat_torus(Rational(0));
  TensorElement expected = -(TensorElement::basis(g->frame, {0, 0}) + TensorElement::basis(g->frame, {1, 1}));
  CHECK(quantum_metric(*g) == expected);
}

TEST_CASE("classical junk is symmetric and fixed by psi") {
  auto g = samples::flat_torus(Rational(0));
  const AlgebraPtr& a = g->algebra;
  std::mt19937 rng(36);
  std::vector<Element> bs = test_generators(a);
  for (int k = 0; k < 10; ++k) bs.push_back(random_element(a, rng));
  ModuleOperator flip = sigma_theta(g->frame);
  for (const auto& j : junk_from_connection(*g, bs)) {
    CHECK(flip.apply(j) == j);
    CHECK(g->psi.apply(j) == j);
  }
  // b = uv: ∇(db) = -b (dx⊗dx + dx⊗dy + dy⊗dx + dy⊗dy)
  Element uv = samples::mono(a, 1, 1, 1);
  TensorElement expected(g->frame, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expected -= TensorElement::basis(g->frame, {i, j}, uv);
  CHECK(junk_from_connection(*g, std::vector<Element>{uv}).front() == expected);
  CHECK(junk_from_connection(*g, std::vector<Element>{Element::constant(a, a->from_int(3))}).front().is_zero());
}

TEST_CASE("noncommutative torus junk lies in the image of psi") {
  std::mt19937 rng(37);
  for (const auto& g : {samples::flat_torus(Rational(1, 3)), samples::flat_torus(Rational(1, 5)),
                        samples::fuzzy_flat(5, 1), samples::fuzzy_curved()}) {
    CAPTURE(g->name);
    std::vector<Element> bs = test_generators(g->algebra);
    for (int k = 0; k < 10; ++k) bs.push_back(random_element(g->algebra, rng));
    auto junk = junk_from_connection(*g, bs);
    for (size_t k = 0; k < junk.size(); ++k) {
      CHECK(g->psi.apply(junk[k]) == junk[k]);
      if (g->closed) {
        TensorElement gi = grassmann_image(*g, differential0(*g, bs[k]));
        CHECK(g->psi.apply(gi) == gi);
      }
    }
  }
}

TEST_CASE("junk without lifts is refused") {
  auto g = samples::fuzzy_curved();
  Geometry bare = *g;
  bare.lifts.clear();
  CHECK_THROWS_AS(junk_from_connection(bare, test_generators(g->algebra)), std::invalid_argument);
}

TEST_CASE("floating copies validate") {
  auto g = to_approx(samples::fuzzy_curved());
  CHECK(validate(*g).passed());
  CHECK_FALSE(g->algebra->exact());
}

#include <doctest.h>

#include "lcw/algebra.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lcw;

namespace {

// direct evaluation of lambda^e = e^{2 pi i theta e}
Complex lam(double theta, long long e) {
  double a = 2.0 * std::numbers::pi * theta * static_cast<double>(e);
  return {std::cos(a), std::sin(a)};
}

Element mono(const AlgebraPtr& a, long long n1, long long n2, long long c = 1) {
  return Element::monomial(a, {n1, n2}, a->from_int(c));
}

Element random_element(const AlgebraPtr& a, std::mt19937& rng, int range) {
  std::uniform_int_distribution<int> deg(-range, range), coef(-4, 4);
  std::vector<Element::Term> t;
  for (int i = 0; i < 4; ++i) {
    Scalar c = a->from_int(coef(rng)) + a->imag_unit() * a->from_int(coef(rng));
    t.push_back({Degree{deg(rng), deg(rng)}, c});
  }
  return Element::from_terms(a, t);
}

}  // namespace

TEST_CASE("theta phase frozen values") {
  auto a5 = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  CHECK(a5->theta_phase({1, 0}, {0, 1}) == a5->lambda_power(4));
  CHECK(a5->theta_phase({1, 0}, {0, 1}) == a5->lambda_power(-1));
  auto a3 = Algebra::laurent(Rational(1, 3), FieldKind::exact);
  CHECK(a3->theta_phase({2, 1}, {1, 2}) == a3->one());
  CHECK(std::abs(lam(1.0 / 3, 1 * 1 - 2 * 2) - Complex(1.0, 0.0)) < 1e-12);
  for (auto m : {Degree{0, 0}, Degree{3, -2}, Degree{1, 7}}) CHECK(a5->theta_phase(m, m) == a5->one());
}

TEST_CASE("theta phase matches direct complex evaluation and is a bicharacter") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-6, 6);
  for (auto [p, q] : {std::pair{1, 3}, std::pair{1, 5}, std::pair{2, 5}}) {
    auto a = Algebra::laurent(Rational(p, q), FieldKind::exact);
    for (int t = 0; t < 50; ++t) {
      Degree m{d(rng), d(rng)}, m2{d(rng), d(rng)}, n{d(rng), d(rng)};
      Complex want = lam(double(p) / q, m.n2 * n.n1 - n.n2 * m.n1);
      CHECK(std::abs(a->theta_phase(m, n).to_complex() - want) < 1e-12);
      CHECK(a->theta_phase(n, m) == a->theta_phase(m, n).conj());
      CHECK(a->theta_phase(m + m2, n) == a->theta_phase(m, n) * a->theta_phase(m2, n));
    }
  }
}

TEST_CASE("deformed product and adjoint examples") {
  auto a = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  Element u = mono(a, 1, 0), v = mono(a, 0, 1);
  CHECK(u * v == mono(a, 1, 1));
  CHECK(v * u == Element::monomial(a, {1, 1}, a->lambda_power(1)));
  CHECK(u * v == (v * u) * a->theta_phase({1, 0}, {0, 1}));
  Element one = Element::constant(a, a->one());
  CHECK(one * v == v);
  CHECK(mono(a, 1, 1).adjoint() == Element::monomial(a, {-1, -1}, a->lambda_power(1)));
  CHECK(mono(a, 1, 0).adjoint() == mono(a, -1, 0));
}

TEST_CASE("random elements: associativity, antimultiplicative involution, commutation rule") {
  std::mt19937 rng(11);
  for (auto a : {Algebra::laurent(Rational(1, 5), FieldKind::exact), Algebra::fuzzy(5, 1, FieldKind::exact),
                 Algebra::laurent(Rational(2, 3), FieldKind::exact)}) {
    for (int t = 0; t < 20; ++t) {
      Element x = random_element(a, rng, 3), y = random_element(a, rng, 3), z = random_element(a, rng, 3);
      CHECK((x * y) * z == x * (y * z));
      CHECK(x.adjoint().adjoint() == x);
      CHECK((x * y).adjoint() == y.adjoint() * x.adjoint());
      for (auto& [m, xm] : x.homogeneous_parts())
        for (auto& [n, yn] : y.homogeneous_parts()) CHECK(xm * yn == (yn * xm) * a->theta_phase(m, n));
    }
  }
}

TEST_CASE("derivation examples and Leibniz rule") {
  auto a = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  CHECK(Element::constant(a, a->one()).derivation(0).is_zero());
  Element u = mono(a, 1, 0);
  CHECK(u.derivation(0) == u * a->imag_unit());
  CHECK(u.derivation(1).is_zero());
  std::mt19937 rng(5);
  for (int t = 0; t < 30; ++t) {
    Element x = random_element(a, rng, 4), y = random_element(a, rng, 4);
    for (int j = 0; j < 2; ++j) CHECK((x * y).derivation(j) == x.derivation(j) * y + x * y.derivation(j));
  }
  // fuzzy: Leibniz inside the non-wrapping window
  auto f = Algebra::fuzzy(7, 2, FieldKind::exact);
  for (int t = 0; t < 30; ++t) {
    Element x = random_element(f, rng, 1), y = random_element(f, rng, 1);
    for (int j = 0; j < 2; ++j) CHECK((x * y).derivation(j) == x.derivation(j) * y + x * y.derivation(j));
  }
}

TEST_CASE("homogeneous parts") {
  auto a = Algebra::laurent(Rational(1, 3), FieldKind::exact);
  Element one = Element::constant(a, a->one());
  auto p1 = one.homogeneous_parts();
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].first == Degree{0, 0});
  Element s = mono(a, 1, 0) + mono(a, 0, 2, 3);
  auto p2 = s.homogeneous_parts();
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].second + p2[1].second == s);

  // clock + shift at q = 3, decomposed from the matrix picture
  auto f = Algebra::fuzzy(3, 1, FieldKind::approx);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3), sh = Eigen::MatrixXcd::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    c(k, k) = lam(1.0 / 3, k);
    sh((k + 2) % 3, k) = 1.0;  // S e_k = e_{k-1}
  }
  Element e = Element::from_matrix(f, c + sh);
  auto parts = e.homogeneous_parts();
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == Degree{0, 1});
  CHECK(parts[1].first == Degree{1, 0});
  CHECK(std::abs(parts[0].second.coefficient({0, 1}).approx() - 1.0) < 1e-12);
  CHECK(std::abs(parts[1].second.coefficient({1, 0}).approx() - 1.0) < 1e-12);
  // S C = lambda C S
  CHECK((sh * c - lam(1.0 / 3, 1) * c * sh).norm() < 1e-12);
}

TEST_CASE("fuzzy matrix picture is a faithful *-representation") {
  std::mt19937 rng(9);
  auto ex = Algebra::fuzzy(5, 2, FieldKind::exact);
  for (int t = 0; t < 10; ++t) {
    Element x = random_element(ex, rng, 4), y = random_element(ex, rng, 4);
    CHECK((x.to_matrix() * y.to_matrix() - (x * y).to_matrix()).norm() < 1e-11);
    CHECK((x.to_matrix().adjoint() - x.adjoint().to_matrix()).norm() < 1e-11);
    auto ap = Algebra::fuzzy(5, 2, FieldKind::approx);
    Element back = Element::from_matrix(ap, x.to_matrix());
    CHECK((back - x.to_approx(ap)).max_abs() < 1e-12);
  }
}

TEST_CASE("exact and approx backends agree after embedding") {
  std::mt19937 rng(13);
  auto ex = Algebra::laurent(Rational(1, 5), FieldKind::exact);
  auto ap = Algebra::laurent(Rational(1, 5), FieldKind::approx);
  for (int t = 0; t < 30; ++t) {
    Element x = random_element(ex, rng, 5), y = random_element(ex, rng, 5);
    Element xa = x.to_approx(ap), ya = y.to_approx(ap);
    CHECK(((x * y).to_approx(ap) - xa * ya).max_abs() < 1e-12);
    CHECK((x.adjoint().to_approx(ap) - xa.adjoint()).max_abs() < 1e-12);
    CHECK((x.derivation(1).to_approx(ap) - xa.derivation(1)).max_abs() < 1e-12);
  }
}

TEST_CASE("grid elements are commutative functions") {
  auto g = Algebra::grid({8, 8});
  auto sh = g->grid_shape();
  auto f = Element::from_grid(g, GridFunction::trig(sh, {{{0, 1}, Complex(0.5, 0)}, {{0, -1}, Complex(0.5, 0)}}));
  CHECK(f.homogeneous_parts().size() == 1);
  Element df = f.derivation(1);
  for (size_t p = 0; p < sh->points(); ++p)
    CHECK(std::abs(df.value_at(p) + std::sin(sh->coordinate(p, 1))) < 1e-12);
  CHECK_THROWS(Element::monomial(g, {1, 0}, g->one()));
}

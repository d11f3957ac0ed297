#include <doctest.h>

#include "../support/random_elements.hpp"
#include "../support/sample_geometries.hpp"
#include "lcw/projection.hpp"

using namespace lcw;
using samples::random_element;
using samples::random_tensor;

namespace {

std::vector<GeometryPtr> exact_geometries() {
  return {samples::flat_torus(Rational(0)), samples::flat_torus(Rational(1, 5)), samples::fuzzy_curved(),
          samples::fuzzy_overcomplete()};
}

}  // namespace

TEST_CASE("dagger of a basis two-tensor on the flat torus swaps the legs") {
  auto g = samples::flat_torus(Rational(0));
  CHECK(tensor_dagger(TensorElement::basis(g->frame, {0, 1})) == TensorElement::basis(g->frame, {1, 0}));
  CHECK(tensor_dagger(TensorElement::basis(g->frame, {0})) == -TensorElement::basis(g->frame, {0}));
}

TEST_CASE("product Gram operator is an idempotent fixing canonical tensors") {
  std::mt19937 rng(11);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 1; k <= 3; ++k) {
      const ModuleOperator& id = g->frame->identity(k);
      CHECK(id.compose(id) == id);
      CHECK(id.adjoint() == id);
      TensorElement t = random_tensor(g->frame, k, rng);
      CHECK(id.apply(t) == t);
    }
  }
}

TEST_CASE("tensor dagger is an antilinear involution") {
  std::mt19937 rng(12);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 1; k <= 3; ++k) {
      TensorElement t = random_tensor(g->frame, k, rng);
      CHECK(tensor_dagger(tensor_dagger(t)) == t);
      Element b = random_element(g->algebra, rng, 1, 2);
      CHECK(tensor_dagger(t * b) == left_mul(b.adjoint(), tensor_dagger(t)));
      Scalar i = g->algebra->imag_unit();
      CHECK(tensor_dagger(t * i) == tensor_dagger(t) * (-i));
    }
  }
}

TEST_CASE("dagger reverses tensor products") {
  std::mt19937 rng(13);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    TensorElement s = random_tensor(g->frame, 1, rng), t = random_tensor(g->frame, 2, rng);
    CHECK(tensor_dagger(tensor(s, t)) == tensor(tensor_dagger(t), tensor_dagger(s)));
  }
}

TEST_CASE("inner product is conjugate symmetric and right linear") {
  std::mt19937 rng(14);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 1; k <= 2; ++k) {
      TensorElement s = random_tensor(g->frame, k, rng), t = random_tensor(g->frame, k, rng);
      Element b = random_element(g->algebra, rng, 1, 2);
      CHECK(inner_product(s, t).adjoint() == inner_product(t, s));
      CHECK(inner_product(s, t * b) == inner_product(s, t) * b);
      CHECK(inner_product(s * b, t) == b.adjoint() * inner_product(s, t));
    }
  }
}

TEST_CASE("left multiplication is a left action commuting with the right one") {
  std::mt19937 rng(15);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    TensorElement t = random_tensor(g->frame, 2, rng);
    Element a = random_element(g->algebra, rng, 1, 2), b = random_element(g->algebra, rng, 1, 2);
    CHECK(left_mul(a, left_mul(b, t)) == left_mul(a * b, t));
    CHECK(left_mul(a, t * b) == left_mul(a, t) * b);
    CHECK(tensor(left_mul(a, random_tensor(g->frame, 1, rng)), t).valid());
  }
}

TEST_CASE("tensor products are balanced") {
  std::mt19937 rng(16);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    TensorElement s = random_tensor(g->frame, 1, rng), t = random_tensor(g->frame, 1, rng);
    Element b = random_element(g->algebra, rng, 1, 2);
    CHECK(tensor(s * b, t) == tensor(s, left_mul(b, t)));
  }
}

TEST_CASE("alpha and its inverse round trip") {
  std::mt19937 rng(17);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    for (int k = 2; k <= 3; ++k) {
      TensorElement a = random_tensor(g->frame, k, rng);
      auto cols = alpha_right(a);
      CHECK(alpha_right_inv(cols) == a);
      TensorElement x = random_tensor(g->frame, 1, rng);
      Element b = random_element(g->algebra, rng, 1, 2);
      CHECK(alpha_right_apply(a, x * b) == alpha_right_apply(a, x) * b);
    }
  }
}

TEST_CASE("alpha of x tensor y dagger pairs with y") {
  std::mt19937 rng(18);
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    TensorElement x = random_tensor(g->frame, 1, rng), y = random_tensor(g->frame, 1, rng), z = random_tensor(g->frame, 1, rng);
    CHECK(alpha_right_apply(tensor(x, tensor_dagger(y)), z) == x * inner_product(y, z));
  }
}

TEST_CASE("left alpha is left linear") {
  std::mt19937 rng(19);
  auto g = samples::fuzzy_curved();
  const FramePtr& f = g->frame;
  TensorElement x = random_tensor(f, 1, rng), y = random_tensor(f, 1, rng);
  // ←α(x ⊗ Y)(w) = <w†, x> Y on w = ω_m
  auto cols = alpha_left(tensor(x, y));
  for (int m = 0; m < f->size(); ++m) {
    Element p = inner_product(tensor_dagger(TensorElement::basis(f, {m})), x);
    CHECK(cols[m] == left_mul(p, y));
  }
}

TEST_CASE("sigma theta is an involution and twists basis tensors") {
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    const FramePtr& f = g->frame;
    ModuleOperator s = sigma_theta(f);
    CHECK(s.compose(s) == f->identity(2));
    ModuleOperator psi = psi_from_braiding(s);
    CHECK(psi.compose(psi) == psi);
    CHECK(braiding_from_psi(psi) == s);
  }
  auto g = samples::flat_torus(Rational(1, 5));
  ModuleOperator s = sigma_theta(g->frame);
  CHECK(s.apply(TensorElement::basis(g->frame, {0, 1})) == TensorElement::basis(g->frame, {1, 0}));
}

TEST_CASE("P and Q are self-adjoint projections") {
  for (const auto& g : exact_geometries()) {
    CAPTURE(g->name);
    ProjectionPair pq = build_PQ(g->psi);
    CHECK(pq.P.compose(pq.P) == pq.P);
    CHECK(pq.Q.compose(pq.Q) == pq.Q);
    CHECK(pq.P.adjoint() == pq.P);
    CHECK(pq.Q.adjoint() == pq.Q);
  }
}

TEST_CASE("identity psi extends to identities") {
  auto g = samples::fuzzy_curved();
  const FramePtr& f = g->frame;
  CHECK(extend_right(f->identity(2)) == f->identity(3));
  CHECK(extend_left(f->identity(2)) == f->identity(3));
}

TEST_CASE("operator algebra") {
  std::mt19937 rng(20);
  auto g = samples::fuzzy_curved();
  ProjectionPair pq = build_PQ(g->psi);
  ModuleOperator a = pq.P, b = pq.Q;
  CHECK(a.compose(b).adjoint() == b.compose(a));
  TensorElement t = random_tensor(g->frame, 3, rng);
  CHECK(a.compose(b).apply(t) == a.apply(b.apply(t)));
  CHECK((a + b).apply(t) == a.apply(t) + b.apply(t));
  // <Pt, s> = <t, Ps>
  TensorElement s = random_tensor(g->frame, 3, rng);
  CHECK(inner_product(a.apply(t), s) == inner_product(t, a.apply(s)));
}

TEST_CASE("exact and floating tensors agree") {
  std::mt19937 rng(21);
  auto g = samples::fuzzy_curved();
  auto ga = to_approx(g);
  TensorElement t = random_tensor(g->frame, 2, rng);
  TensorElement d = tensor_dagger(t).to_approx(ga->frame) - tensor_dagger(t.to_approx(ga->frame));
  CHECK(d.max_abs() < 1e-12);
}

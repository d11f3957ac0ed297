#pragma once

#include "lcw/calculus.hpp"

#include <cmath>

namespace lcw::samples {

inline Element mono(const AlgebraPtr& a, long long n1, long long n2, const Rational& c) {
  return Element::monomial(a, {n1, n2}, a->from_rational(c));
}

// coordinate frame dx, dy with <dx^μ, dx^ν> = δ
inline GeometryPtr flat_torus(const Rational& theta, FieldKind field = FieldKind::exact) {
  GeometryInput in;
  in.name = "flat";
  in.algebra = Algebra::laurent(theta, field);
  ElemMatrix h(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i) {
    h(i, i) = mono(in.algebra, 0, 0, 1);
    b(i, i) = mono(in.algebra, 0, 0, 1);
  }
  in.presentation = Presentation{h, b};
  return build_geometry(in);
}

inline GeometryPtr fuzzy_flat(int q, int p, FieldKind field = FieldKind::exact) {
  GeometryInput in;
  in.name = "fuzzy-flat";
  in.algebra = Algebra::fuzzy(q, p, field);
  ElemMatrix h(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i) {
    h(i, i) = mono(in.algebra, 0, 0, 1);
    b(i, i) = mono(in.algebra, 0, 0, 1);
  }
  in.presentation = Presentation{h, b};
  return build_geometry(in);
}

// overcomplete twisted frame {dx V 2/3, dx V^{-1} 2/3, dx 1/3, dy U 2/3, dy U^{-1} 2/3, dy 1/3}; W = 0
inline GeometryPtr fuzzy_overcomplete(int q = 5, int p = 1, FieldKind field = FieldKind::exact) {
  GeometryInput in;
  in.name = "fuzzy-overcomplete";
  in.algebra = Algebra::fuzzy(q, p, field);
  const auto& a = in.algebra;
  ElemMatrix h(2, 2), b(2, 6);
  h(0, 0) = mono(a, 0, 0, 1);
  h(1, 1) = mono(a, 0, 0, 1);
  b(0, 0) = mono(a, 0, 1, Rational(2, 3));
  b(0, 1) = mono(a, 0, -1, Rational(2, 3));
  b(0, 2) = mono(a, 0, 0, Rational(1, 3));
  b(1, 3) = mono(a, 1, 0, Rational(2, 3));
  b(1, 4) = mono(a, -1, 0, Rational(2, 3));
  b(1, 5) = mono(a, 0, 0, Rational(1, 3));
  in.presentation = Presentation{h, b};
  return build_geometry(in);
}

// {(dx + i dy) V 2/3, (dx - i dy) V^{-1} 2/3, dx/3, dy/3}: homogeneous, closed under dagger, W != 0
inline GeometryPtr fuzzy_curved(int q = 5, int p = 1, FieldKind field = FieldKind::exact) {
  GeometryInput in;
  in.name = "fuzzy-curved";
  in.algebra = Algebra::fuzzy(q, p, field);
  const auto& a = in.algebra;
  const Scalar i = a->imag_unit();
  ElemMatrix h(2, 2), b(2, 4);
  h(0, 0) = mono(a, 0, 0, 1);
  h(1, 1) = mono(a, 0, 0, 1);
  b(0, 0) = mono(a, 0, 1, Rational(2, 3));
  b(1, 0) = mono(a, 0, 1, Rational(2, 3)) * i;
  b(0, 1) = mono(a, 0, -1, Rational(2, 3));
  b(1, 1) = -(mono(a, 0, -1, Rational(2, 3)) * i);
  b(0, 2) = mono(a, 0, 0, Rational(1, 3));
  b(1, 3) = mono(a, 0, 0, Rational(1, 3));
  in.presentation = Presentation{h, b};
  return build_geometry(in);
}

// T^3 grid with metric diag((2+cos z)^2, (2+sin(z)/2)^2, 1)
inline GeometryPtr grid_curved(int n = 32) {
  GeometryInput in;
  in.name = "grid-curved";
  in.algebra = Algebra::grid({n, n, n});
  auto sh = in.algebra->grid_shape();
  const Complex I(0.0, 1.0);
  // (2+cos z)^2 = 9/2 + 4 cos z + cos(2z)/2
  std::vector<TrigTerm> gx = {{{0, 0, 0}, 4.5}, {{0, 0, 1}, 2.0}, {{0, 0, -1}, 2.0}, {{0, 0, 2}, 0.25}, {{0, 0, -2}, 0.25}};
  // (2+sin(z)/2)^2 = 33/8 + 2 sin z - cos(2z)/8
  std::vector<TrigTerm> gy = {{{0, 0, 0}, 33.0 / 8}, {{0, 0, 1}, -I}, {{0, 0, -1}, I},
                              {{0, 0, 2}, -1.0 / 16}, {{0, 0, -2}, -1.0 / 16}};
  in.diagonal_metric = std::vector<Element>{Element::from_grid(in.algebra, GridFunction::trig(sh, gx)),
                                            Element::from_grid(in.algebra, GridFunction::trig(sh, gy)),
                                            Element::from_grid(in.algebra, GridFunction::constant(1.0))};
  return build_geometry(in);
}

}  // namespace lcw::samples

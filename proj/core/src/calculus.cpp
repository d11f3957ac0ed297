#include "lcw/calculus.hpp"

#include <algorithm>
#include <stdexcept>

namespace lcw {

namespace {

Element unit(const AlgebraPtr& a) { return Element::constant(a, a->one()); }

ElemMatrix adjoint_transpose(const ElemMatrix& m) {
  ElemMatrix r(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) r(j, i) = m(i, j).adjoint();
  return r;
}

ElemMatrix multiply(const ElemMatrix& a, const ElemMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix size mismatch");
  ElemMatrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Element s;
      for (int k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        s += a(i, k) * b(k, j);
      }
      r(i, j) = s;
    }
  return r;
}

double matrix_residual(const ElemMatrix& a, const ElemMatrix& b, bool& zero) {
  double m = 0;
  zero = true;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      Element d = a(i, j) - b(i, j);
      if (!d.is_zero()) zero = false;
      m = std::max(m, d.max_abs());
    }
  return m;
}

TensorElement column(const FramePtr& f, const ElemMatrix& m, int j) {
  std::vector<Element> c(f->size());
  for (int i = 0; i < f->size(); ++i) c[i] = m(i, j);
  return TensorElement::from_coordinates(f, 1, std::move(c));
}

// ω_j ⊗ y
TensorElement prepend(const FramePtr& f, int j, const TensorElement& y) {
  const size_t tail = y.size();
  std::vector<Element> raw(tail * f->size());
  for (size_t l = 0; l < tail; ++l) raw[j * tail + l] = y[l];
  return TensorElement::from_coordinates(f, y.rank() + 1, std::move(raw));
}

Degree column_degree(const ElemMatrix& b, int j) {
  std::optional<Degree> d;
  for (int mu = 0; mu < b.rows(); ++mu) {
    const Element& e = b(mu, j);
    if (e.is_zero()) continue;
    auto h = e.homogeneous_degree();
    if (!h) throw std::invalid_argument("frame expansion entries must be homogeneous");
    if (d && *d != *h) throw std::invalid_argument("frame label with mixed degrees");
    d = h;
  }
  return d.value_or(Degree{});
}

Check make_check(std::string name, bool exact_backend, bool zero, double residual, double tol) {
  Check c;
  c.name = std::move(name);
  c.exact = exact_backend;
  c.residual = residual;
  c.passed = exact_backend ? zero : residual <= tol;
  return c;
}

}  // namespace

bool near_zero(const Element& e, double tol) {
  if (e.is_neutral()) return true;
  if (e.algebra()->exact()) return e.is_zero();
  return e.max_abs() <= tol;
}

bool near_zero(const TensorElement& t, double tol) {
  if (!t.valid()) return true;
  if (t.frame()->algebra()->exact()) return t.is_zero();
  return t.max_abs() <= tol;
}

bool near_zero(const ModuleOperator& m, double tol) {
  if (m.frame()->algebra()->exact()) return m.is_zero();
  return m.max_abs() <= tol;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Element coordinate_unitary(const AlgebraPtr& alg, int axis) {
  if (alg->backend() == Backend::grid) {
    std::vector<int> k(alg->axes(), 0);
    k[axis] = 1;
    return Element::from_grid(alg, GridFunction::trig(alg->grid_shape(), {{k, Complex(1.0, 0.0)}}));
  }
  Degree d = axis == 0 ? Degree{1, 0} : Degree{0, 1};
  return Element::monomial(alg, d, alg->one());
}

std::vector<Element> test_generators(const AlgebraPtr& alg) {
  std::vector<Element> out;
  for (int mu = 0; mu < alg->axes(); ++mu) {
    Element u = coordinate_unitary(alg, mu);
    out.push_back(u);
    out.push_back(u.adjoint());
  }
  if (alg->axes() >= 2) out.push_back(out[0] * out[2] + unit(alg) * alg->from_int(2));
  return out;
}

GeometryPtr build_geometry(const GeometryInput& in) {
  if (!in.algebra) throw std::invalid_argument("geometry without algebra");
  auto g = std::make_shared<Geometry>();
  g->name = in.name;
  g->algebra = in.algebra;
  const AlgebraPtr& alg = in.algebra;
  const int axes = alg->axes();

  std::vector<Degree> degrees;
  ElemMatrix gram, dagger, coords;
  // raw (uncanonicalized) derived dagger columns and the frame expansion
  std::optional<ElemMatrix> expansion;

  if (in.diagonal_metric) {
    const auto& gm = *in.diagonal_metric;
    if (static_cast<int>(gm.size()) != axes) throw std::invalid_argument("diagonal metric needs one entry per axis");
    if (alg->backend() != Backend::grid) throw std::invalid_argument("diagonal metric presentation is for the grid backend");
    degrees.assign(axes, Degree{});
    gram = ElemMatrix(axes, axes);
    dagger = ElemMatrix(axes, axes);
    coords = ElemMatrix(axes, axes);
    ElemMatrix b(axes, axes), h(axes, axes);
    for (int mu = 0; mu < axes; ++mu) {
      GridFunction s = gm[mu].grid().sqrt();
      b(mu, mu) = Element::from_grid(alg, s);
      h(mu, mu) = Element::from_grid(alg, gm[mu].grid().reciprocal());
      coords(mu, mu) = Element::from_grid(alg, s.reciprocal());
      gram(mu, mu) = unit(alg);
      dagger(mu, mu) = unit(alg) * alg->from_int(-1);
    }
    expansion = b;
    g->presentation = Presentation{h, b};
    g->diagonal_metric = gm;
  } else if (in.presentation) {
    const auto& p = *in.presentation;
    const ElemMatrix& h = p.inverse_metric;
    const ElemMatrix& b = p.expansion;
    if (h.rows() != axes || h.cols() != axes || b.rows() != axes)
      throw std::invalid_argument("presentation matrices do not match the algebra dimension");
    const int n = b.cols();
    for (int j = 0; j < n; ++j) degrees.push_back(alg->reduce(column_degree(b, j)));
    ElemMatrix bd = adjoint_transpose(b);
    gram = multiply(multiply(bd, h), b);
    coords = multiply(bd, h);
    // ω_j† = -Σ_μ B_μj† dx^μ = -Σ_l ω_l Σ_μ twist(B_μj†, d_l) E_lμ
    dagger = ElemMatrix(n, n);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) {
        Element s;
        for (int mu = 0; mu < axes; ++mu) {
          if (b(mu, j).is_zero() || coords(l, mu).is_zero()) continue;
          s -= b(mu, j).adjoint().twist(degrees[l]) * coords(l, mu);
        }
        dagger(l, j) = s;
      }
    expansion = b;
    g->presentation = p;
  }

  if (in.degrees) degrees = *in.degrees;
  if (in.gram) gram = *in.gram;
  if (in.coordinate_forms) coords = *in.coordinate_forms;
  const bool explicit_dagger = in.dagger.has_value();
  if (explicit_dagger) dagger = *in.dagger;
  if (degrees.empty() || gram.rows() == 0 || dagger.rows() == 0)
    throw std::invalid_argument("geometry needs a presentation or explicit degrees, gram and dagger");
  const int n = static_cast<int>(degrees.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (gram(i, j).is_neutral()) gram(i, j) = Element(alg);
      if (dagger(i, j).is_neutral()) dagger(i, j) = Element(alg);
    }

  // dagger columns are stored canonically
  {
    FramePtr tmp = Frame::make(alg, degrees, gram, dagger);
    ElemMatrix dc(n, n);
    for (int j = 0; j < n; ++j) {
      TensorElement c = column(tmp, dagger, j);
      for (int i = 0; i < n; ++i) dc(i, j) = c[i];
    }
    g->frame = Frame::make(alg, degrees, gram, dc);
  }
  const FramePtr& f = g->frame;
  g->coordinate_forms = coords;

  if (in.psi) {
    g->psi = ModuleOperator::from_raw(f, 2, *in.psi);
    g->psi_source = "explicit";
  } else {
    g->psi = psi_from_braiding(sigma_theta(f));
    g->psi_source = "sigma-theta";
  }
  const ModuleOperator lambda2 = lambda2_projection(*g);

  if (in.frame_differentials) {
    if (static_cast<int>(in.frame_differentials->size()) != n) throw std::invalid_argument("one frame differential per label");
    for (const auto& raw : *in.frame_differentials)
      g->frame_differentials.push_back(TensorElement::from_coordinates(f, 2, raw));
  } else if (expansion && coords.rows() == n) {
    // d(ω_j) = -(1-Ψ) Σ_μ dx^μ ⊗ d(B_μj)
    for (int j = 0; j < n; ++j) {
      TensorElement s(f, 2);
      for (int mu = 0; mu < axes; ++mu) {
        const Element& bmj = (*expansion)(mu, j);
        if (bmj.is_zero()) continue;
        s += tensor(column(f, coords, mu), differential0(*g, bmj));
      }
      g->frame_differentials.push_back(-lambda2.apply(s));
    }
  } else {
    throw std::invalid_argument("frame differentials are neither given nor derivable");
  }

  g->closed = std::all_of(g->frame_differentials.begin(), g->frame_differentials.end(),
                          [&](const TensorElement& t) { return near_zero(t, 1e-13); });

  if (in.lifts) {
    if (static_cast<int>(in.lifts->size()) != n) throw std::invalid_argument("one lift correction per label");
    for (const auto& raw : *in.lifts) g->lifts.push_back(TensorElement::from_coordinates(f, 2, raw));
  } else if (g->closed) {
    g->lifts.assign(n, TensorElement(f, 2));
  } else if (expansion && coords.rows() == n) {
    // universal lifts dx^μ = π(-i U_μ^{-1} δ U_μ) give T_j = Σ_μ d(-i U_μ^{-1}) ⊗ d(U_μ B_μj)
    const Scalar minus_i = alg->imag_unit() * alg->from_int(-1);
    for (int j = 0; j < n; ++j) {
      TensorElement s(f, 2);
      for (int mu = 0; mu < axes; ++mu) {
        const Element& bmj = (*expansion)(mu, j);
        if (bmj.is_zero()) continue;
        Element u = coordinate_unitary(alg, mu);
        s += tensor(differential0(*g, u.adjoint() * minus_i), differential0(*g, u * bmj));
      }
      g->lifts.push_back(s);
    }
  }
  return g;
}

GeometryPtr to_approx(const GeometryPtr& g) {
  const AlgebraPtr& a = g->algebra;
  if (!a->exact()) return g;
  AlgebraPtr ap;
  if (a->backend() == Backend::fuzzy) ap = Algebra::fuzzy(a->modulus(), static_cast<int>(a->theta()->get_num().get_si()), FieldKind::approx);
  else ap = Algebra::laurent(*a->theta(), FieldKind::approx);
  auto conv = [&](const ElemMatrix& m) {
    ElemMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_approx(ap);
    return r;
  };
  const FramePtr& f = g->frame;
  auto out = std::make_shared<Geometry>();
  out->name = g->name;
  out->algebra = ap;
  out->frame = Frame::make(ap, f->degrees(), conv(f->gram()), conv(f->dagger()));
  std::vector<ModuleOperator::Row> rows(g->psi.dimension());
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, e] : g->psi.row(i)) rows[i].push_back({j, e.to_approx(ap)});
  out->psi = ModuleOperator::from_canonical(out->frame, 2, std::move(rows));
  out->psi_source = g->psi_source;
  for (const auto& t : g->frame_differentials) out->frame_differentials.push_back(t.to_approx(out->frame));
  for (const auto& t : g->lifts) out->lifts.push_back(t.to_approx(out->frame));
  out->coordinate_forms = conv(g->coordinate_forms);
  if (g->presentation) out->presentation = Presentation{conv(g->presentation->inverse_metric), conv(g->presentation->expansion)};
  out->closed = g->closed;
  out->tolerance = g->tolerance;
  return out;
}

ModuleOperator lambda2_projection(const Geometry& g) { return g.frame->identity(2) - g.psi; }

TensorElement differential0(const Geometry& g, const Element& b) {
  const FramePtr& f = g.frame;
  const int n = f->size();
  if (g.coordinate_forms.rows() != n) throw std::invalid_argument("geometry has no coordinate forms; d is undefined");
  std::vector<Element> raw(n);
  for (int mu = 0; mu < g.axes(); ++mu) {
    Element db = b.derivation(mu);
    if (db.is_zero()) continue;
    for (int j = 0; j < n; ++j)
      if (!g.coordinate_forms(j, mu).is_zero()) raw[j] += g.coordinate_forms(j, mu) * db;
  }
  return TensorElement::from_coordinates(f, 1, std::move(raw));
}

TensorElement grassmann_image(const Geometry& g, const TensorElement& x) {
  const FramePtr& f = g.frame;
  const int n = f->size();
  const size_t tail = f->dimension(x.rank());
  std::vector<Element> raw(tail * n);
  // d acts on the last coefficient slot of one-forms only; higher ranks are not needed
  if (x.rank() != 1) throw std::invalid_argument("grassmann_image expects a one-form");
  for (int j = 0; j < n; ++j) {
    if (x[j].is_zero()) continue;
    TensorElement dj = differential0(g, x[j]);
    for (size_t l = 0; l < tail; ++l) raw[j * tail + l] = dj[l];
  }
  return TensorElement::from_coordinates(f, 2, std::move(raw));
}

TensorElement exterior_d(const Geometry& g, const TensorElement& x) {
  const FramePtr& f = g.frame;
  TensorElement s(f, 2);
  for (int j = 0; j < f->size(); ++j)
    if (!x[j].is_zero()) s += g.frame_differentials[j] * x[j];
  return s - lambda2_projection(g).apply(grassmann_image(g, x));
}

TensorElement quantum_metric(const Geometry& g) {
  const FramePtr& f = g.frame;
  TensorElement s(f, 2);
  for (int j = 0; j < f->size(); ++j) s += prepend(f, j, f->basis_dagger(j, 1));
  return s;
}

std::vector<TensorElement> junk_from_connection(const Geometry& g, const std::vector<Element>& bs) {
  if (g.lifts.empty()) throw std::invalid_argument("junk needs lift corrections for a non-closed frame");
  std::vector<TensorElement> out;
  for (const auto& b : bs) {
    TensorElement db = differential0(g, b);
    TensorElement t = grassmann_image(g, db);
    for (int j = 0; j < g.frame->size(); ++j)
      if (!db[j].is_zero()) t -= g.lifts[j] * db[j];
    out.push_back(t);
  }
  return out;
}

ValidationReport validate(const Geometry& g) {
  ValidationReport rep;
  const FramePtr& f = g.frame;
  const AlgebraPtr& alg = g.algebra;
  const bool ex = alg->exact();
  const double tol = g.tolerance;
  const int n = f->size();
  if (static_cast<int>(g.frame_differentials.size()) != n) throw std::invalid_argument("malformed geometry");
  auto gens = test_generators(alg);

  {
    bool z1 = true, z2 = true;
    double r1 = matrix_residual(multiply(f->gram(), f->gram()), f->gram(), z1);
    double r2 = matrix_residual(adjoint_transpose(f->gram()), f->gram(), z2);
    rep.checks.push_back(make_check("frame projection", ex, z1 && z2, std::max(r1, r2), tol));
  }
  {
    // Σ_j ω_j <ω_j, η> = η on η = ω_i b, and the coordinate forms reproduce h
    double r = 0;
    bool zero = true;
    for (int i = 0; i < n; ++i)
      for (const auto& b : gens) {
        std::vector<Element> raw(n);
        raw[i] = b;
        TensorElement eta = TensorElement::from_coordinates(f, 1, raw);
        TensorElement back = TensorElement::from_coordinates(f, 1, eta.coefficients());
        TensorElement d = back - eta;
        zero = zero && d.is_zero();
        r = std::max(r, d.max_abs());
      }
    if (g.presentation && g.coordinate_forms.rows() == n) {
      const ElemMatrix& h = g.presentation->inverse_metric;
      for (int mu = 0; mu < g.axes(); ++mu)
        for (int nu = 0; nu < g.axes(); ++nu) {
          Element ip = inner_product(column(f, g.coordinate_forms, mu), column(f, g.coordinate_forms, nu));
          Element d = ip - h(mu, nu);
          zero = zero && d.is_zero();
          r = std::max(r, d.max_abs());
        }
    }
    rep.checks.push_back(make_check("frame relation", ex, zero, r, tol));
  }
  {
    double r = 0;
    bool zero = true;
    for (int j = 0; j < n; ++j)
      for (const auto& b : gens) {
        TensorElement w = TensorElement::basis(f, {j}, b);
        TensorElement d = tensor_dagger(tensor_dagger(w)) - w;
        zero = zero && d.is_zero();
        r = std::max(r, d.max_abs());
      }
    rep.checks.push_back(make_check("dagger involution", ex, zero, r, tol));
  }
  {
    ModuleOperator d = g.psi.compose(g.psi) - g.psi;
    rep.checks.push_back(make_check("psi idempotent", ex, d.is_zero(), d.max_abs(), tol));
    ModuleOperator s = g.psi.adjoint() - g.psi;
    rep.checks.push_back(make_check("psi self-adjoint", ex, s.is_zero(), s.max_abs(), tol));
  }
  {
    double r = 0;
    bool zero = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const auto& b : gens) {
          TensorElement t = TensorElement::basis(f, {i, j}, b);
          TensorElement d = g.psi.apply(tensor_dagger(t)) - tensor_dagger(g.psi.apply(t));
          zero = zero && d.is_zero();
          r = std::max(r, d.max_abs());
        }
    rep.checks.push_back(make_check("psi dagger commutation", ex, zero, r, tol));
  }
  {
    double r = 0;
    bool zero = true;
    ModuleOperator l2 = lambda2_projection(g);
    for (const auto& t : g.frame_differentials) {
      TensorElement d = l2.apply(t) - t;
      zero = zero && d.is_zero();
      r = std::max(r, d.max_abs());
    }
    rep.checks.push_back(make_check("frame differentials in Lambda2", ex, zero, r, tol));
  }
  if (g.coordinate_forms.rows() == n) {
    double r = 0;
    bool zero = true;
    for (const auto& b : gens) {
      TensorElement d = exterior_d(g, differential0(g, b));
      zero = zero && d.is_zero();
      r = std::max(r, d.max_abs());
    }
    rep.checks.push_back(make_check("d o d = 0", ex, zero, r, tol));
  }
  {
    TensorElement gm = quantum_metric(g);
    double r = 0;
    bool zero = true;
    for (const auto& b : gens) {
      TensorElement d = left_mul(b, gm) - gm * b;
      zero = zero && d.is_zero();
      r = std::max(r, d.max_abs());
    }
    rep.checks.push_back(make_check("metric central", ex, zero, r, tol));
    double r2 = 0;
    bool zero2 = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        TensorElement x = TensorElement::basis(f, {i});
        TensorElement y = TensorElement::basis(f, {j});
        Element d = inner_product(gm, tensor(x, y)) - inner_product(tensor_dagger(x), y);
        zero2 = zero2 && d.is_zero();
        r2 = std::max(r2, d.max_abs());
      }
    rep.checks.push_back(make_check("metric inner product", ex, zero2, r2, tol));
  }
  return rep;
}

}  // namespace lcw

#include "lcw/levi_civita.hpp"

#include "lcw/flat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace lcw {

namespace {

TensorElement prepend_basis(const FramePtr& f, int j, const TensorElement& y) {
  const size_t tail = y.size();
  std::vector<Element> c(tail * f->size());
  for (size_t l = 0; l < tail; ++l) c[j * tail + l] = y[l];
  return TensorElement::from_coordinates(f, y.rank() + 1, std::move(c));
}

// the a-th row block of a tensor, as a tensor of one rank lower
TensorElement slot(const TensorElement& t, int a) {
  const FramePtr& f = t.frame();
  const size_t tail = f->dimension(t.rank() - 1);
  std::vector<Element> c(tail);
  for (size_t j = 0; j < tail; ++j) c[j] = t[a * tail + j];
  return TensorElement::from_canonical(f, t.rank() - 1, std::move(c));
}

double norm_of(const TensorElement& t) { return t.is_zero() ? 0.0 : tensor_norm(t); }

bool small(const TensorElement& t, double tol, double& res) {
  res = norm_of(t);
  return t.frame()->algebra()->exact() ? t.is_zero() : res <= tol;
}

ModuleOperator operator_to_approx(const ModuleOperator& op, const FramePtr& f) {
  std::vector<ModuleOperator::Row> rows(op.dimension());
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, e] : op.row(i)) rows[i].push_back({j, e.to_approx(f->algebra())});
  return ModuleOperator::from_canonical(f, op.rank(), std::move(rows));
}

// r with a = b·r, or nothing
std::optional<Scalar> proportional(const TensorElement& a, const TensorElement& b) {
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_zero()) continue;
    const auto& t = b[i].terms();
    if (t.empty()) return std::nullopt;
    Scalar r = a[i].is_zero() ? b[i].algebra()->zero() : a[i].coefficient(t.front().first) * t.front().second.inverse();
    if (a == b * r) return r;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

ConnectionEvaluator::ConnectionEvaluator(const Connection& c) : c_(c) {
  if (!c_.A.is_zero()) cols_ = alpha_right(c_.A);
}

TensorElement ConnectionEvaluator::apply(const TensorElement& x) const {
  TensorElement out = grassmann_image(*c_.geometry, x);
  for (size_t m = 0; m < cols_.size(); ++m)
    if (!x[m].is_zero()) out += cols_[m] * x[m];
  return out;
}

TensorElement ConnectionEvaluator::conjugate(const TensorElement& x) const {
  return -tensor_dagger(apply(tensor_dagger(x)));
}

Connection grassmann(const GeometryPtr& g) { return {g, TensorElement(g->frame, 3), "grassmann"}; }

WTensors compute_W(const Geometry& g) {
  const FramePtr& f = g.frame;
  TensorElement w(f, 3);
  for (int j = 0; j < f->size(); ++j)
    if (!g.frame_differentials[j].is_zero()) w += tensor(g.frame_differentials[j], f->basis_dagger(j, 1));
  return {w, tensor_dagger(w)};
}

Connection connection_form_series(const GeometryPtr& g, const ProjectionPair& pq, const TwoProjectionReport& rep,
                                  double tol, long max_iter, SeriesInfo* info) {
  if (!rep.concordant) throw std::domain_error("the geometry is not concordant");
  if (!rep.pi) throw std::domain_error("the series needs the limit projection as an operator");
  const bool exact = g->algebra->exact();
  WTensors w = compute_W(*g);
  TensorElement t = w.W + pq.P.apply(w.Wdag);
  TensorElement v = t - rep.pi->apply(t);
  TensorElement sum = v;
  SeriesInfo si;
  si.terms = 1;
  for (long k = 1;; ++k) {
    if (v.is_zero()) break;
    TensorElement next = pq.P.apply(pq.Q.apply(v));
    if (exact) {
      if (next.is_zero()) break;
      if (auto r = proportional(next, v)) {
        if (r->abs() >= 1.0) throw NonConvergence("series ratio has modulus >= 1", r->abs());
        Scalar tail = (g->algebra->one() - *r).inverse();
        sum += next * tail;
        si.terms = k + 1;
        si.geometric_tail = true;
        break;
      }
    }
    sum += next;
    si.terms = k + 1;
    si.last_increment = norm_of(next);
    if (!exact && si.last_increment < tol) break;
    if (k >= max_iter) throw NonConvergence("connection-form series did not converge", si.last_increment);
    v = std::move(next);
  }
  if (info) *info = si;
  return {g, -sum, "series"};
}

Connection connection_form_closed(const GeometryPtr& g, const ProjectionPair& pq, double tol) {
  double braid = 0;
  if (!braid_relation(pq.P, pq.Q, tol, &braid))
    throw HypothesisFailure("braid relation fails; residual " + std::to_string(braid), braid);
  WTensors w = compute_W(*g);
  const Scalar two = g->algebra->from_int(2);
  TensorElement qw = pq.Q.apply(w.W) * two - w.W;
  TensorElement rhs = pq.P.apply(qw) * two - qw;
  double res = 0;
  if (!small(w.Wdag - rhs, tol, res)) throw HypothesisFailure("W-cyclicity fails; residual " + std::to_string(res), res);
  TensorElement a = w.W + pq.P.apply(pq.Q.apply(w.W)) * g->algebra->from_int(4);
  return {g, -a, "closed"};
}

CertificationReport certify(const Connection& c, const ProjectionPair& pq, double tol) {
  const Geometry& g = *c.geometry;
  const FramePtr& f = g.frame;
  const int n = f->size();
  CertificationReport rep;
  rep.exact = g.algebra->exact();
  ConnectionEvaluator ev(c);
  WTensors w = compute_W(g);
  double r = 0;

  rep.hermitian = small(c.A - tensor_dagger(c.A), tol, r);
  rep.residuals["hermitian"] = r;
  rep.torsion_free = small(c.A - pq.P.apply(c.A) + w.W, tol, r);
  rep.residuals["torsion_free"] = r;
  rep.dag_concordant = small(c.A - pq.Q.apply(c.A) + w.Wdag, tol, r);
  rep.residuals["dag_concordant"] = r;

  ModuleOperator sigma = braiding_from_psi(g.psi);
  std::vector<TensorElement> nabla(n);
  bool ok = true;
  double worst = 0;
  auto gens = test_generators(g.algebra);
  for (int j = 0; j < n; ++j) {
    TensorElement wj = TensorElement::basis(f, {j});
    nabla[j] = ev.apply(wj);
    ok = small(sigma.apply(nabla[j]) - ev.conjugate(wj), tol, r) && ok;
    worst = std::max(worst, r);
    for (const auto& b : gens) {
      TensorElement x = wj * b;
      ok = small(sigma.apply(ev.apply(x)) - ev.conjugate(x), tol, r) && ok;
      worst = std::max(worst, r);
    }
  }
  rep.bimodule = ok;
  rep.residuals["bimodule"] = worst;

  TensorElement m(f, 3);
  for (int j = 0; j < n; ++j) {
    const TensorElement& dj = f->basis_dagger(j, 1);
    m += tensor(nabla[j], dj);
    m += prepend_basis(f, j, ev.conjugate(dj));
  }
  rep.metric_compatible = small(m, tol, r);
  rep.residuals["metric_compatible"] = r;
  return rep;
}

TensorElement torsion_tensor(const Connection& c, const ProjectionPair& pq) {
  const Geometry& g = *c.geometry;
  const FramePtr& f = g.frame;
  ConnectionEvaluator ev(c);
  TensorElement s(f, 3);
  for (int j = 0; j < f->size(); ++j) {
    TensorElement x = ev.apply(TensorElement::basis(f, {j})) + g.frame_differentials[j];
    s += tensor(x, f->basis_dagger(j, 1));
  }
  return s - pq.P.apply(s);
}

TensorElement curvature(const Connection& c, const TensorElement& x) {
  const Geometry& g = *c.geometry;
  const FramePtr& f = g.frame;
  ConnectionEvaluator ev(c);
  TensorElement nx = ev.apply(x);
  TensorElement s(f, 3);
  for (int a = 0; a < f->size(); ++a) {
    TensorElement eta = slot(nx, a);
    if (eta.is_zero()) continue;
    s += tensor(ev.apply(TensorElement::basis(f, {a})), eta);
    s += prepend_basis(f, a, exterior_d(g, eta));
  }
  return extend_left(lambda2_projection(g)).apply(s);
}

namespace {

void check_frame(const Geometry& g, const std::vector<TensorElement>& y) {
  const FramePtr& f = g.frame;
  for (const auto& t : y)
    if (t.frame() != f || t.rank() != 1) throw std::invalid_argument("frame elements must be one-forms of the geometry");
  for (int m = 0; m < f->size(); ++m) {
    TensorElement wm = TensorElement::basis(f, {m});
    TensorElement s(f, 1);
    for (const auto& t : y) s += t * inner_product(t, wm);
    if (!near_zero(s - wm, g.tolerance)) throw std::invalid_argument("the second frame does not present the same module");
  }
}

}  // namespace

TensorElement frame_change_tensor(const Geometry& g, const std::vector<TensorElement>& w_frame) {
  check_frame(g, w_frame);
  TensorElement b(g.frame, 3);
  for (const auto& y : w_frame) b += tensor(grassmann_image(g, y), tensor_dagger(y));
  return b;
}

TensorElement grassmann_image_in(const Geometry& g, const std::vector<TensorElement>& w_frame, const TensorElement& x) {
  TensorElement s(g.frame, 2);
  for (const auto& y : w_frame) {
    Element p = inner_product(y, x);
    if (!p.is_zero()) s += tensor(y, differential0(g, p));
  }
  return s;
}

ComparisonReport compare_mod_sym3(const Connection& c1, const Connection& c2, const ModuleOperator& pi, double tol) {
  ComparisonReport rep;
  TensorElement d = c1.A - c2.A;
  rep.difference = d - pi.apply(d);
  rep.equivalent = small(rep.difference, tol, rep.residual);
  double r = 0;
  rep.equal = small(d, tol, r);
  return rep;
}

namespace {

// (α + σ^{-1}∘←α)(B) evaluated on each ω_m
std::vector<TensorElement> correction_operator(const TensorElement& b, const ModuleOperator& sigma_inv) {
  auto right = alpha_right(b);
  auto left = alpha_left(b);
  for (size_t m = 0; m < right.size(); ++m) right[m] += sigma_inv.apply(left[m]);
  return right;
}

struct RowKey {
  size_t m, idx;
  Degree deg;
  auto operator<=>(const RowKey&) const = default;
};

constexpr size_t kMaxUnknowns = 4000;

}  // namespace

BimoduleCorrection bimodule_correction(const Connection& c0, const ModuleOperator& sigma, double tol) {
  const Geometry& g = *c0.geometry;
  const FramePtr& f = g.frame;
  const AlgebraPtr& alg = g.algebra;
  const int n = f->size();
  BimoduleCorrection out;
  if (!near_zero(sigma.compose(sigma) - f->identity(2), tol))
    throw std::invalid_argument("the braiding must be an involution");
  const ModuleOperator& sigma_inv = sigma;

  ConnectionEvaluator ev(c0);
  std::vector<TensorElement> rhs(n);
  for (int m = 0; m < n; ++m) {
    TensorElement wm = TensorElement::basis(f, {m});
    rhs[m] = sigma_inv.apply(ev.conjugate(wm)) - ev.apply(wm);
    out.rhs_norm = std::max(out.rhs_norm, norm_of(rhs[m]));
  }
  bool zero = true;
  for (const auto& t : rhs) zero = zero && (alg->exact() ? t.is_zero() : out.rhs_norm <= tol);
  if (zero) {
    out.solved = true;
    out.B = TensorElement(f, 3);
    out.note = "right-hand side vanishes";
    return out;
  }
  if (alg->exact()) {
    GeometryPtr ga = to_approx(c0.geometry);
    Connection ca{ga, c0.A.to_approx(ga->frame), c0.method};
    BimoduleCorrection r = bimodule_correction(ca, operator_to_approx(sigma, ga->frame), tol);
    r.note = "solved over the approximate field; " + r.note;
    return r;
  }

  const size_t d3 = f->dimension(3), d2 = f->dimension(2);

  if (alg->backend() == Backend::grid) {
    // pointwise linear algebra: constant basis tensors span the unknowns
    const size_t npts = alg->grid_shape()->points();
    std::vector<std::vector<TensorElement>> cols(d3);
    bool constant = true;
    for (size_t i = 0; i < d3; ++i) {
      std::vector<Element> c(d3);
      c[i] = Element::constant(alg, alg->one());
      cols[i] = correction_operator(TensorElement::from_coordinates(f, 3, std::move(c)), sigma_inv);
      for (const auto& t : cols[i])
        for (size_t k = 0; k < t.size(); ++k) constant = constant && (t[k].is_zero() || t[k].grid().is_constant());
    }
    out.unknowns = d3 * (constant ? 1 : npts);
    const Eigen::Index rows = static_cast<Eigen::Index>(n * d2);
    auto value = [&](const Element& e, size_t p) -> Complex {
      if (e.is_zero()) return 0.0;
      return e.grid().is_constant() ? e.grid().constant_value() : e.value_at(p);
    };
    auto matrix_at = [&](size_t p) {
      Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(d3));
      for (size_t i = 0; i < d3; ++i)
        for (int m = 0; m < n; ++m)
          for (size_t k = 0; k < d2; ++k) mat(m * d2 + k, i) = value(cols[i][m][k], p);
      return mat;
    };
    Eigen::MatrixXcd rhs_all(rows, static_cast<Eigen::Index>(npts));
    for (size_t p = 0; p < npts; ++p)
      for (int m = 0; m < n; ++m)
        for (size_t k = 0; k < d2; ++k) rhs_all(m * d2 + k, p) = value(rhs[m][k], p);
    Eigen::MatrixXcd sol(static_cast<Eigen::Index>(d3), static_cast<Eigen::Index>(npts));
    double res = 0;
    if (constant) {
      Eigen::MatrixXcd mat = matrix_at(0);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(mat);
      sol = cod.solve(rhs_all);
      res = (mat * sol - rhs_all).cwiseAbs().maxCoeff();
    } else {
      for (size_t p = 0; p < npts; ++p) {
        Eigen::MatrixXcd mat = matrix_at(p);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(mat);
        sol.col(p) = cod.solve(rhs_all.col(p));
        res = std::max(res, (mat * sol.col(p) - rhs_all.col(p)).cwiseAbs().maxCoeff());
      }
    }
    out.residual = res;
    out.solved = res <= tol * std::max(1.0, out.rhs_norm);
    std::vector<Element> c(d3);
    for (size_t i = 0; i < d3; ++i) {
      std::vector<Complex> v(npts);
      for (size_t p = 0; p < npts; ++p) v[p] = sol(i, p);
      c[i] = Element::from_grid(alg, GridFunction::from_samples(alg->grid_shape(), std::move(v)));
    }
    out.B = TensorElement::from_coordinates(f, 3, std::move(c));
    out.note = out.solved ? "least-squares solution" : "no solution";
    return out;
  }

  // Laurent and fuzzy: unknowns ω_I·U^k over a finite set of degrees
  std::set<Degree> candidates;
  if (alg->backend() == Backend::fuzzy) {
    const int q = alg->modulus();
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) candidates.insert(alg->reduce({a, b}));
  } else {
    std::set<Degree> shifts, targets;
    for (size_t i = 0; i < d3; ++i) {
      std::vector<Element> c(d3);
      c[i] = Element::constant(alg, alg->one());
      for (const auto& t : correction_operator(TensorElement::from_coordinates(f, 3, std::move(c)), sigma_inv))
        for (size_t k = 0; k < t.size(); ++k)
          for (const auto& term : t[k].terms()) shifts.insert(term.first);
    }
    for (const auto& t : rhs)
      for (size_t k = 0; k < t.size(); ++k)
        for (const auto& term : t[k].terms()) targets.insert(term.first);
    for (const auto& r : targets)
      for (const auto& s : shifts) candidates.insert(r - s);
  }
  out.unknowns = d3 * candidates.size();
  if (out.unknowns > kMaxUnknowns) {
    out.note = "linear system too large to solve densely (" + std::to_string(out.unknowns) + " unknowns)";
    return out;
  }
  std::map<RowKey, Eigen::Index> row_index;
  auto row_of = [&](size_t m, size_t k, Degree d) {
    auto it = row_index.find({m, k, d});
    if (it == row_index.end()) it = row_index.emplace(RowKey{m, k, d}, static_cast<Eigen::Index>(row_index.size())).first;
    return it->second;
  };
  std::vector<std::pair<size_t, std::vector<std::pair<Eigen::Index, Complex>>>> columns;
  std::vector<std::pair<size_t, Degree>> unknown;
  for (size_t i = 0; i < d3; ++i)
    for (const auto& deg : candidates) {
      std::vector<Element> c(d3);
      c[i] = Element::monomial(alg, deg, alg->one());
      auto img = correction_operator(TensorElement::from_coordinates(f, 3, std::move(c)), sigma_inv);
      std::vector<std::pair<Eigen::Index, Complex>> col;
      for (int m = 0; m < n; ++m)
        for (size_t k = 0; k < d2; ++k)
          for (const auto& term : img[m][k].terms()) col.push_back({row_of(m, k, term.first), term.second.to_complex()});
      columns.push_back({unknown.size(), std::move(col)});
      unknown.push_back({i, deg});
    }
  std::vector<std::pair<Eigen::Index, Complex>> b;
  for (int m = 0; m < n; ++m)
    for (size_t k = 0; k < d2; ++k)
      for (const auto& term : rhs[m][k].terms()) b.push_back({row_of(m, k, term.first), term.second.to_complex()});
  const Eigen::Index rows = static_cast<Eigen::Index>(row_index.size());
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(unknown.size()));
  for (const auto& [j, col] : columns)
    for (const auto& [r, z] : col) mat(r, static_cast<Eigen::Index>(j)) += z;
  Eigen::VectorXcd vb = Eigen::VectorXcd::Zero(rows);
  for (const auto& [r, z] : b) vb(r) += z;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(mat);
  Eigen::VectorXcd sol = cod.solve(vb);
  out.residual = rows ? (mat * sol - vb).cwiseAbs().maxCoeff() : 0.0;
  out.solved = out.residual <= tol * std::max(1.0, out.rhs_norm);
  std::vector<Element> c(d3);
  for (size_t u = 0; u < unknown.size(); ++u) {
    if (std::abs(sol(u)) <= 1e-14) continue;
    const auto& [i, deg] = unknown[u];
    c[i] += Element::monomial(alg, deg, alg->from_complex(sol(u)));
  }
  out.B = TensorElement::from_coordinates(f, 3, std::move(c));
  out.note = out.solved ? "least-squares solution" : "no solution";
  return out;
}

}  // namespace lcw

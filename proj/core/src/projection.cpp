#include "lcw/projection.hpp"

#include <array>
#include <cmath>

namespace lcw {

namespace {

using Perm = std::array<int, 3>;

Perm compose(const Perm& a, const Perm& b) { return {a[b[0]], a[b[1]], a[b[2]]}; }

// words e, U, V, UV, VU, UVU with U = (0 1), V = (1 2)
const std::array<Perm, 6>& words() {
  static const std::array<Perm, 6> w = [] {
    Perm e{0, 1, 2}, u{1, 0, 2}, v{0, 2, 1};
    return std::array<Perm, 6>{e, u, v, compose(u, v), compose(v, u), compose(u, compose(v, u))};
  }();
  return w;
}

int word_of(const Perm& p) {
  for (int i = 0; i < 6; ++i)
    if (words()[i] == p) return i;
  throw std::logic_error("not a permutation of three letters");
}

int product_word(int a, int b) { return word_of(compose(words()[a], words()[b])); }

S3Element from_coeffs(std::array<Rational, 6> c) { return S3Element{std::move(c)}; }

ModuleOperator word_operator(int w, const ModuleOperator& u, const ModuleOperator& v) {
  switch (w) {
    case 0: return u.frame()->identity(u.rank());
    case 1: return u;
    case 2: return v;
    case 3: return u.compose(v);
    case 4: return v.compose(u);
    default: return u.compose(v.compose(u));
  }
}

ModuleOperator reflection(const ModuleOperator& p) {
  return p * p.frame()->algebra()->from_int(2) - p.frame()->identity(p.rank());
}

double trace_rank(const ModuleOperator& pi) {
  const AlgebraPtr& alg = pi.frame()->algebra();
  double s = 0;
  for (size_t i = 0; i < pi.dimension(); ++i) {
    Element e = pi.entry(i, i);
    if (e.is_zero()) continue;
    if (alg->backend() == Backend::grid) {
      const GridFunction& g = e.grid();
      if (g.is_constant()) {
        s += g.constant_value().real();
      } else {
        double m = 0;
        for (const auto& z : g.samples()) m += z.real();
        s += m / static_cast<double>(g.samples().size());
      }
    } else {
      s += e.coefficient(Degree{}).to_complex().real();
    }
  }
  return s;
}

double flat_trace(const std::vector<Eigen::MatrixXcd>& blocks, double scale) {
  double s = 0;
  for (const auto& b : blocks) s += b.trace().real();
  return s / scale;
}

}  // namespace

ProjectionPair build_PQ(const ModuleOperator& psi) { return {extend_right(psi), extend_left(psi)}; }

S3Element s3_multiply(const S3Element& a, const S3Element& b) {
  std::array<Rational, 6> c;
  for (auto& x : c) x = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (a.c[i] != 0 && b.c[j] != 0) c[product_word(i, j)] += a.c[i] * b.c[j];
  return from_coeffs(c);
}

S3Element s3_inverse(const S3Element& a) {
  // solve a·y = e through the left regular representation
  std::array<std::array<Rational, 7>, 6> m;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 7; ++c) m[r][c] = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m[product_word(i, j)][j] += a.c[i];
  m[0][6] = 1;
  for (int col = 0; col < 6; ++col) {
    int piv = -1;
    for (int r = col; r < 6; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("singular element of the group algebra");
    std::swap(m[piv], m[col]);
    Rational inv = 1 / m[col][col];
    for (int c = col; c < 7; ++c) m[col][c] *= inv;
    for (int r = 0; r < 6; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (int c = col; c < 7; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<Rational, 6> y;
  for (int i = 0; i < 6; ++i) y[i] = m[i][6];
  return from_coeffs(y);
}

TensorElement s3_apply(const S3Element& g, const ModuleOperator& P, const ModuleOperator& Q, const TensorElement& t) {
  const AlgebraPtr& alg = t.frame()->algebra();
  const Scalar two = alg->from_int(2);
  auto U = [&](const TensorElement& x) { return P.apply(x) * two - x; };
  auto V = [&](const TensorElement& x) { return Q.apply(x) * two - x; };
  std::array<TensorElement, 6> img;
  img[0] = t;
  img[1] = U(t);
  img[2] = V(t);
  img[3] = U(img[2]);
  img[4] = V(img[1]);
  img[5] = U(img[4]);
  TensorElement out(t.frame(), t.rank());
  for (int i = 0; i < 6; ++i)
    if (g.c[i] != 0) out += img[i] * alg->from_rational(g.c[i]);
  return out;
}

bool braid_relation(const ModuleOperator& P, const ModuleOperator& Q, double tol, double* residual) {
  ModuleOperator u = reflection(P), v = reflection(Q);
  ModuleOperator d = u.compose(v.compose(u)) - v.compose(u.compose(v));
  if (residual) *residual = d.max_abs();
  return P.frame()->algebra()->exact() ? d.is_zero() : d.max_abs() <= tol;
}

double friedrichs_angle(const ModuleOperator& P, const ModuleOperator& Q, const ModuleOperator& pi) {
  FlatSpace s = FlatSpace::build({&P, &Q});
  ModuleOperator d = P.compose(Q) - pi;
  return max_spectral_norm(s.flatten(d));
}

TwoProjectionReport limit_projection(const ModuleOperator& P, const ModuleOperator& Q, ProjectionMethod method,
                                     double tol, long max_iter) {
  TwoProjectionReport rep;
  const FramePtr& f = P.frame();
  const AlgebraPtr& alg = f->algebra();
  double braid_res = 0;
  rep.s3 = braid_relation(P, Q, std::max(tol, 1e-12), &braid_res);
  const bool flat_ok = FlatSpace::supported(*f);
  if (method == ProjectionMethod::automatic) method = rep.s3 ? ProjectionMethod::group_average : ProjectionMethod::iterative;
  if (method == ProjectionMethod::group_average && !rep.s3)
    throw std::domain_error("group averaging needs the braid relation (residual " + std::to_string(braid_res) + ")");
  if (method == ProjectionMethod::iterative && !flat_ok)
    throw std::domain_error("iteration needs a finite-dimensional norm, which the Laurent backend lacks");

  if (rep.s3) {
    ModuleOperator u = reflection(P), v = reflection(Q);
    ModuleOperator sum = word_operator(0, u, v);
    for (int w = 1; w < 6; ++w) sum = sum + word_operator(w, u, v);
    ModuleOperator pi = sum * alg->from_rational(Rational(1, 6));
    rep.pi = pi;
    // the two-dimensional irreducible component decides the angle: 1/2 if present, else 0
    ModuleOperator e_std = (word_operator(0, u, v) * alg->from_int(2) - word_operator(3, u, v) - word_operator(4, u, v)) *
                           alg->from_rational(Rational(1, 3));
    bool standard = !(alg->exact() ? e_std.is_zero() : e_std.max_abs() <= 1e-12);
    rep.friedrichs_angle = standard ? 0.5 : 0.0;
    rep.angle_from_group = true;
    rep.pi_rank = trace_rank(pi);
  }

  if (method == ProjectionMethod::group_average) {
    rep.method = "group-average";
    rep.concordant = true;
    if (flat_ok) {
      FlatSpace s = FlatSpace::build({&P, &Q});
      rep.pi_flat = s.flatten(*rep.pi);
      auto pf = s.flatten(P), qf = s.flatten(Q);
      double angle = 0;
      for (size_t b = 0; b < pf.size(); ++b) angle = std::max(angle, spectral_norm(pf[b] * qf[b] - rep.pi_flat[b]));
      rep.friedrichs_angle = angle;
      rep.angle_from_group = false;
    }
    return rep;
  }

  rep.method = "iterative";
  FlatSpace s = FlatSpace::build({&P, &Q});
  auto pf = s.flatten(P), qf = s.flatten(Q);
  std::vector<Eigen::MatrixXcd> pq(pf.size()), x(pf.size());
  for (size_t b = 0; b < pf.size(); ++b) pq[b] = pf[b] * qf[b];
  x = pq;
  long n = 1;
  double diff = 0;
  for (;;) {
    diff = 0;
    for (size_t b = 0; b < x.size(); ++b) diff = std::max(diff, spectral_norm(x[b] * pq[b] - x[b]));
    if (diff < tol) break;
    if (2 * n > max_iter) {
      rep.iterations = n;
      rep.residual = diff;
      throw NonConvergence("(PQ)^n did not converge within " + std::to_string(max_iter) + " steps", diff);
    }
    for (auto& m : x) m = m * m;
    n *= 2;
  }
  rep.iterations = n;
  rep.residual = diff;
  rep.pi_flat = x;
  double angle = 0;
  for (size_t b = 0; b < x.size(); ++b) angle = std::max(angle, spectral_norm(pq[b] - x[b]));
  rep.friedrichs_angle = angle;
  rep.angle_from_group = false;
  rep.concordant = angle < 1.0;
  rep.pi_rank = flat_trace(x, s.trace_scale());
  if (!alg->exact()) rep.pi = s.unflatten(x, f, P.rank());
  return rep;
}

TensorElement neumann_inverse(const ModuleOperator& P, const ModuleOperator& Q, const TwoProjectionReport& rep,
                              const TensorElement& t, double tol, long max_iter) {
  if (rep.s3) {
    const Rational sixth(1, 6), quarter(1, 4);
    // 1 + Π - PQ with PQ = (e + U + V + UV)/4
    S3Element x{{Rational(1) + sixth - quarter, sixth - quarter, sixth - quarter, sixth - quarter, sixth, sixth}};
    return s3_apply(s3_inverse(x), P, Q, t);
  }
  if (!rep.pi) throw std::domain_error("Neumann series needs the limit projection as an operator");
  if (t.frame()->algebra()->exact()) throw std::domain_error("exact Neumann series without the braid relation does not terminate");
  TensorElement v = t - rep.pi->apply(t);
  TensorElement sum = rep.pi->apply(t) + v;
  for (long k = 0; k < max_iter; ++k) {
    v = P.apply(Q.apply(v));
    sum += v;
    if (tensor_norm(v) < tol) return sum;
  }
  throw NonConvergence("Neumann series did not converge", tensor_norm(v));
}

}  // namespace lcw

#include "lcw/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace lcw::oracle {

Complex TrigPolynomial::value(const std::vector<double>& x, const std::vector<int>& axes) const {
  Complex s = 0.0;
  for (const auto& t : terms) {
    double phase = 0;
    for (size_t a = 0; a < t.k.size() && a < x.size(); ++a) phase += t.k[a] * x[a];
    Complex f = t.c;
    for (int a : axes) f *= Complex(0.0, a < static_cast<int>(t.k.size()) ? t.k[a] : 0);
    s += f * std::exp(Complex(0.0, phase));
  }
  return s;
}

MetricField::MetricField(int dim) : dim_(dim), g_(static_cast<size_t>(dim) * dim) {}

MetricField MetricField::diagonal(std::vector<TrigPolynomial> entries) {
  MetricField m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim_; ++i) m.g_[i * m.dim_ + i] = std::move(entries[i]);
  return m;
}

void MetricField::set(int mu, int nu, TrigPolynomial p) {
  g_[mu * dim_ + nu] = p;
  g_[nu * dim_ + mu] = std::move(p);
}

bool MetricField::is_diagonal() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && !g_[i * dim_ + j].terms.empty()) return false;
  return true;
}

namespace {

Eigen::MatrixXd metric_at(const MetricField& g, const std::vector<double>& x, const std::vector<int>& axes) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g.entry(i, j).value(x, axes).real();
  return m;
}

Eigen::MatrixXd inverse_metric(const Eigen::MatrixXd& g) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12) throw std::domain_error("metric is not invertible");
  return lu.inverse();
}

}  // namespace

Table3 christoffel(const MetricField& g, const std::vector<double>& x) {
  const int n = g.dim();
  Eigen::MatrixXd ginv = inverse_metric(metric_at(g, x, {}));
  std::vector<Eigen::MatrixXd> dg(n);
  for (int k = 0; k < n; ++k) dg[k] = metric_at(g, x, {k});
  Table3 t{n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0)};
  for (int nu = 0; nu < n; ++nu)
    for (int mu = 0; mu < n; ++mu)
      for (int rho = 0; rho < n; ++rho) {
        double s = 0;
        for (int sg = 0; sg < n; ++sg) s += ginv(nu, sg) * (dg[rho](sg, mu) + dg[mu](sg, rho) - dg[sg](mu, rho));
        t.v[(nu * n + mu) * n + rho] = 0.5 * s;
      }
  return t;
}

Table4 christoffel_derivative(const MetricField& g, const std::vector<double>& x) {
  const int n = g.dim();
  Eigen::MatrixXd ginv = inverse_metric(metric_at(g, x, {}));
  std::vector<Eigen::MatrixXd> dg(n);
  std::vector<std::vector<Eigen::MatrixXd>> ddg(n, std::vector<Eigen::MatrixXd>(n));
  for (int k = 0; k < n; ++k) {
    dg[k] = metric_at(g, x, {k});
    for (int l = 0; l < n; ++l) ddg[k][l] = metric_at(g, x, {k, l});
  }
  Table4 t{n, std::vector<double>(static_cast<size_t>(n) * n * n * n, 0.0)};
  for (int kap = 0; kap < n; ++kap) {
    Eigen::MatrixXd dinv = -ginv * dg[kap] * ginv;
    for (int nu = 0; nu < n; ++nu)
      for (int mu = 0; mu < n; ++mu)
        for (int rho = 0; rho < n; ++rho) {
          double s = 0;
          for (int sg = 0; sg < n; ++sg) {
            double first = dg[rho](sg, mu) + dg[mu](sg, rho) - dg[sg](mu, rho);
            double second = ddg[rho][kap](sg, mu) + ddg[mu][kap](sg, rho) - ddg[sg][kap](mu, rho);
            s += dinv(nu, sg) * first + ginv(nu, sg) * second;
          }
          t.v[((nu * n + mu) * n + rho) * n + kap] = 0.5 * s;
        }
  }
  return t;
}

std::vector<double> connection_on_coordinate_form(const Table3& gamma, int nu) {
  const int n = gamma.dim;
  std::vector<double> c(static_cast<size_t>(n) * n);
  for (int rho = 0; rho < n; ++rho)
    for (int mu = 0; mu < n; ++mu) c[rho * n + mu] = -gamma(nu, mu, rho);
  return c;
}

std::vector<double> curvature_on_coordinate_form(const Table3& gamma, const Table4& dgamma, int nu) {
  // ∇(dx^ν) = Σ_ρ dx^ρ ⊗ η_ρ with η_ρ = -Γ^ν_{μρ} dx^μ; apply ∇ ⊗ 1 + 1 ⊗ d and antisymmetrize the tail
  const int n = gamma.dim;
  auto raw = [&](int a, int b, int c) {
    double s = dgamma(nu, b, a, c);
    for (int rho = 0; rho < n; ++rho) s += gamma(rho, b, a) * gamma(nu, c, rho);
    return s;
  };
  std::vector<double> r(static_cast<size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) r[(a * n + b) * n + c] = 0.5 * (raw(a, b, c) - raw(a, c, b));
  return r;
}

namespace {

Complex value_of(const Element& e, size_t p) {
  if (e.is_zero()) return 0.0;
  return e.grid().is_constant() ? e.grid().constant_value() : e.value_at(p);
}

std::vector<double> point_coordinates(const GridShape& sh, size_t p) {
  std::vector<double> x(sh.rank());
  for (int a = 0; a < sh.rank(); ++a) x[a] = sh.coordinate(p, a);
  return x;
}

void require_commutative(const Connection& c, const MetricField& g) {
  const Geometry& geo = *c.geometry;
  if (geo.algebra->backend() != Backend::grid) throw std::invalid_argument("the oracle needs a commutative grid geometry");
  if (!geo.presentation) throw std::invalid_argument("the oracle needs a coordinate presentation");
  if (g.dim() != geo.axes()) throw std::invalid_argument("metric dimension does not match the geometry");
}

TensorElement coordinate_form(const Geometry& g, int nu) {
  std::vector<Element> c(g.frame->size());
  for (int j = 0; j < g.frame->size(); ++j) c[j] = g.coordinate_forms(j, nu);
  return TensorElement::from_coordinates(g.frame, 1, std::move(c));
}

// frame coordinates of a rank-k tensor rewritten on dx^{μ1} ⊗ ... ⊗ dx^{μk} at one point
std::vector<Complex> to_coordinates(const Geometry& g, const TensorElement& t, size_t p) {
  const ElemMatrix& b = g.presentation->expansion;
  const int n = g.frame->size(), d = g.axes(), k = t.rank();
  std::vector<Complex> cur(t.size());
  for (size_t i = 0; i < t.size(); ++i) cur[i] = value_of(t[i], p);
  // contract one slot at a time, front to back
  size_t front = 1;
  size_t back = t.size();
  for (int s = 0; s < k; ++s) {
    back /= n;
    std::vector<Complex> nxt(front * d * back, 0.0);
    for (size_t f = 0; f < front; ++f)
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < d; ++mu) {
          Complex bm = value_of(b(mu, a), p);
          if (bm == 0.0) continue;
          for (size_t r = 0; r < back; ++r) nxt[(f * d + mu) * back + r] += bm * cur[(f * n + a) * back + r];
        }
    cur = std::move(nxt);
    front *= d;
  }
  return cur;
}

template <class Expected>
Comparison compare(const Connection& c, const MetricField& g, int rank, Expected expected) {
  require_commutative(c, g);
  const Geometry& geo = *c.geometry;
  const GridShape& sh = *geo.algebra->grid_shape();
  ConnectionEvaluator ev(c);
  Comparison out;
  out.points = sh.points();
  for (int nu = 0; nu < geo.axes(); ++nu) {
    TensorElement x = coordinate_form(geo, nu);
    TensorElement t = rank == 2 ? ev.apply(x) : curvature(c, x);
    for (size_t p = 0; p < sh.points(); ++p) {
      std::vector<Complex> got = to_coordinates(geo, t, p);
      std::vector<double> want = expected(point_coordinates(sh, p), nu);
      for (size_t i = 0; i < got.size(); ++i) {
        double e = std::abs(got[i] - want[i]);
        if (e > out.max_abs) {
          out.max_abs = e;
          out.worst_form = nu;
          out.worst_point = p;
        }
      }
    }
  }
  return out;
}

}  // namespace

Comparison compare_connection(const Connection& c, const MetricField& g) {
  return compare(c, g, 2, [&](const std::vector<double>& x, int nu) {
    return connection_on_coordinate_form(christoffel(g, x), nu);
  });
}

Comparison compare_curvature(const Connection& c, const MetricField& g) {
  return compare(c, g, 3, [&](const std::vector<double>& x, int nu) {
    return curvature_on_coordinate_form(christoffel(g, x), christoffel_derivative(g, x), nu);
  });
}

}  // namespace lcw::oracle

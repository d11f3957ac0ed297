#include "lcw/algebra.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lcw {

namespace {

// approximate coefficients at or below this magnitude are dropped from sparse sums
constexpr double kDropTol = 1e-14;

bool negligible(const Scalar& s) {
  if (s.is_approx()) return std::abs(s.approx()) <= kDropTol;
  return s.is_zero();
}

long long mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string to_string(Backend b) {
  switch (b) {
    case Backend::laurent: return "laurent";
    case Backend::fuzzy: return "fuzzy";
    case Backend::grid: return "grid";
  }
  return "?";
}

AlgebraPtr Algebra::laurent(const Rational& theta, FieldKind field) {
  Rational t = theta;
  t.canonicalize();
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->backend_ = Backend::laurent;
  a->field_ = field;
  // only θ mod 1 matters
  mpz_class den = t.get_den();
  mpz_class num = t.get_num() % den;
  if (num < 0) num += den;
  if (!den.fits_sint_p()) throw std::invalid_argument("theta denominator too large");
  a->q_ = static_cast<int>(den.get_si());
  a->p_ = num.get_si();
  a->theta_ = Rational(num, den);
  a->theta_double_ = static_cast<double>(a->p_) / a->q_;
  if (field == FieldKind::exact) a->cyclo_ = &CyclotomicField::get(std::lcm(4, a->q_));
  return a;
}

AlgebraPtr Algebra::laurent_irrational(double theta) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->backend_ = Backend::laurent;
  a->field_ = FieldKind::approx;
  a->theta_double_ = theta;
  return a;
}

AlgebraPtr Algebra::fuzzy(int q, int p, FieldKind field) {
  if (q < 1) throw std::invalid_argument("fuzzy torus needs q >= 1");
  long long pp = mod(p, q);
  if (std::gcd(pp, static_cast<long long>(q)) != 1 && q != 1)
    throw std::invalid_argument("fuzzy torus needs gcd(p, q) = 1");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->backend_ = Backend::fuzzy;
  a->field_ = field;
  a->q_ = q;
  a->p_ = pp;
  a->theta_ = Rational(static_cast<long>(pp), static_cast<long>(q));
  a->theta_->canonicalize();
  a->theta_double_ = static_cast<double>(pp) / q;
  if (field == FieldKind::exact) a->cyclo_ = &CyclotomicField::get(std::lcm(4, q));
  return a;
}

AlgebraPtr Algebra::grid(std::vector<int> sizes) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->backend_ = Backend::grid;
  a->field_ = FieldKind::approx;
  a->theta_ = Rational(0);
  a->shape_ = std::make_shared<const GridShape>(std::move(sizes));
  return a;
}

int Algebra::axes() const { return backend_ == Backend::grid ? shape_->rank() : 2; }

std::string Algebra::describe() const {
  std::ostringstream os;
  os << to_string(backend_);
  if (backend_ == Backend::grid) {
    os << " ";
    for (int a = 0; a < shape_->rank(); ++a) os << (a ? "x" : "") << shape_->size(a);
  } else if (theta_) {
    os << " theta=" << to_string(*theta_);
  } else {
    os << " theta=" << theta_double_;
  }
  os << (exact() ? " exact" : " approx");
  return os.str();
}

Degree Algebra::reduce(Degree d) const {
  if (backend_ == Backend::fuzzy) return {mod(d.n1, q_), mod(d.n2, q_)};
  return d;
}

long long Algebra::representative(long long n) const {
  if (backend_ != Backend::fuzzy) return n;
  long long r = mod(n, q_);
  return 2 * r > q_ ? r - q_ : r;
}

Scalar Algebra::zero() const {
  if (exact()) return Scalar(Cyclo(*cyclo_));
  return Scalar(Complex{});
}

Scalar Algebra::one() const { return from_int(1); }

Scalar Algebra::from_int(long long n) const {
  if (exact()) return Scalar(Cyclo::integer(*cyclo_, n));
  return Scalar(Complex(static_cast<double>(n), 0.0));
}

Scalar Algebra::from_rational(const Rational& r) const {
  if (exact()) return Scalar(Cyclo::rational(*cyclo_, r));
  return Scalar(Complex(r.get_d(), 0.0));
}

Scalar Algebra::from_complex(Complex z) const {
  if (exact()) throw std::invalid_argument("complex double given to an exact algebra");
  return Scalar(z);
}

Scalar Algebra::imag_unit() const {
  if (exact()) return Scalar(Cyclo::root(*cyclo_, cyclo_->order() / 4));
  return Scalar(Complex(0.0, 1.0));
}

Scalar Algebra::lambda_power(long long e) const {
  if (exact()) {
    long long M = cyclo_->order();
    long long k = mod(mod(p_ * mod(e, q_), q_) * (M / q_), M);
    return Scalar(Cyclo::root(*cyclo_, k));
  }
  double angle;
  if (theta_) angle = 2.0 * std::numbers::pi * static_cast<double>(mod(p_ * mod(e, q_), q_)) / q_;
  else angle = 2.0 * std::numbers::pi * theta_double_ * static_cast<double>(e);
  return Scalar(Complex(std::cos(angle), std::sin(angle)));
}

Scalar Algebra::theta_phase(Degree m, Degree n) const { return lambda_power(m.n2 * n.n1 - n.n2 * m.n1); }

bool Algebra::compatible(const Algebra& o) const {
  if (this == &o) return true;
  if (backend_ != o.backend_ || field_ != o.field_ || q_ != o.q_ || p_ != o.p_) return false;
  if (theta_.has_value() != o.theta_.has_value()) return false;
  if (!theta_ && theta_double_ != o.theta_double_) return false;
  if (backend_ == Backend::grid) return *shape_ == *o.shape_;
  return true;
}

Scalar theta_phase(const Algebra& alg, Degree m, Degree n) { return alg.theta_phase(m, n); }

// ---- Element ----

Element::Element(AlgebraPtr a) : alg_(std::move(a)) {}

Element Element::constant(AlgebraPtr a, const Scalar& c) { return monomial(std::move(a), Degree{}, c); }

Element Element::monomial(AlgebraPtr a, Degree d, const Scalar& c) {
  Element e(a);
  if (a->backend() == Backend::grid) {
    if (d != Degree{}) throw std::invalid_argument("grid backend has only degree zero");
    e.grid_ = GridFunction::constant(c.to_complex());
    return e;
  }
  if (!negligible(c)) e.terms_.push_back({a->reduce(d), c});
  return e;
}

Element Element::from_terms(AlgebraPtr a, std::vector<Term> terms) {
  if (a->backend() == Backend::grid) {
    Complex s{};
    for (const auto& t : terms) {
      if (t.first != Degree{}) throw std::invalid_argument("grid backend has only degree zero");
      s += t.second.to_complex();
    }
    return from_grid(a, GridFunction::constant(s));
  }
  std::map<Degree, Scalar> acc;
  for (auto& t : terms) {
    Degree d = a->reduce(t.first);
    auto it = acc.find(d);
    if (it == acc.end()) acc.emplace(d, t.second);
    else it->second += t.second;
  }
  Element e(a);
  for (auto& [d, c] : acc)
    if (!negligible(c)) e.terms_.push_back({d, c});
  return e;
}

Element Element::from_grid(AlgebraPtr a, GridFunction f) {
  if (a->backend() != Backend::grid) throw std::invalid_argument("grid data for a non-grid algebra");
  Element e(std::move(a));
  e.grid_ = std::move(f);
  return e;
}

Element Element::from_matrix(AlgebraPtr a, const Eigen::MatrixXcd& m) {
  if (a->backend() != Backend::fuzzy || a->exact()) throw std::invalid_argument("from_matrix needs an approx fuzzy algebra");
  const int q = a->modulus();
  if (m.rows() != q || m.cols() != q) throw std::invalid_argument("matrix size must be q");
  std::vector<Term> terms;
  for (int a1 = 0; a1 < q; ++a1)
    for (int b = 0; b < q; ++b) {
      Complex s{};
      for (int k = 0; k < q; ++k) {
        long long row = mod(k - b, q);
        s += std::conj(a->lambda_power(static_cast<long long>(a1) * (k - b)).approx()) * m(row, k);
      }
      s /= static_cast<double>(q);
      terms.push_back({Degree{a1, b}, Scalar(s)});
    }
  return from_terms(std::move(a), std::move(terms));
}

namespace {

const AlgebraPtr& pick(const Element& a, const Element& b) {
  if (a.is_neutral()) return b.algebra();
  if (!b.is_neutral() && a.algebra() != b.algebra() && !a.algebra()->compatible(*b.algebra()))
    throw std::invalid_argument("elements of different algebras");
  return a.algebra();
}

}  // namespace

Element Element::operator+(const Element& o) const {
  if (is_neutral()) return o;
  if (o.is_neutral()) return *this;
  const AlgebraPtr& a = pick(*this, o);
  if (a->backend() == Backend::grid) return from_grid(a, grid_ + o.grid_);
  Element e(a);
  e.terms_.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      e.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      e.terms_.push_back(o.terms_[j++]);
    } else {
      Scalar s = terms_[i].second + o.terms_[j].second;
      if (!negligible(s)) e.terms_.push_back({terms_[i].first, s});
      ++i;
      ++j;
    }
  }
  return e;
}

Element Element::operator-() const {
  if (is_neutral()) return *this;
  if (is_grid()) return from_grid(alg_, -grid_);
  Element e = *this;
  for (auto& t : e.terms_) t.second = -t.second;
  return e;
}

Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator*(const Scalar& c) const {
  if (is_neutral()) return *this;
  if (is_grid()) return from_grid(alg_, grid_.scaled(c.to_complex()));
  Element e(alg_);
  for (const auto& t : terms_) {
    Scalar s = t.second * c;
    if (!negligible(s)) e.terms_.push_back({t.first, s});
  }
  return e;
}

Element Element::operator*(const Element& o) const {
  if (is_neutral()) return *this;
  if (o.is_neutral()) return o;
  const AlgebraPtr& a = pick(*this, o);
  if (a->backend() == Backend::grid) return from_grid(a, grid_ * o.grid_);
  if (terms_.empty() || o.terms_.empty()) return Element(a);
  if (terms_.size() == 1 && o.terms_.size() == 1) {
    const auto& [m, x] = terms_[0];
    const auto& [n, y] = o.terms_[0];
    return monomial(a, m + n, x * y * a->lambda_power(m.n2 * n.n1));
  }
  std::map<Degree, Scalar> acc;
  for (const auto& [m, x] : terms_)
    for (const auto& [n, y] : o.terms_) {
      Degree d = a->reduce(m + n);
      Scalar c = x * y * a->lambda_power(m.n2 * n.n1);
      auto it = acc.find(d);
      if (it == acc.end()) acc.emplace(d, c);
      else it->second += c;
    }
  Element e(a);
  for (auto& [d, c] : acc)
    if (!negligible(c)) e.terms_.push_back({d, c});
  return e;
}

bool Element::operator==(const Element& o) const {
  if (is_neutral() || o.is_neutral()) return is_zero() && o.is_zero();
  if (is_grid()) {
    if (grid_.is_constant() && o.grid_.is_constant()) return grid_.constant_value() == o.grid_.constant_value();
    return (grid_ - o.grid_).is_zero();
  }
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].first != o.terms_[i].first || !(terms_[i].second == o.terms_[i].second)) return false;
  return true;
}

Element Element::adjoint() const {
  if (is_neutral()) return *this;
  if (is_grid()) return from_grid(alg_, grid_.conj());
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& [d, c] : terms_) t.push_back({-d, c.conj() * alg_->lambda_power(d.n1 * d.n2)});
  return from_terms(alg_, std::move(t));
}

Element Element::twist(Degree d) const {
  if (is_neutral() || is_grid() || d == Degree{}) return *this;
  Element e(alg_);
  for (const auto& [n, c] : terms_) e.terms_.push_back({n, c * alg_->theta_phase(n, d)});
  return e;
}

Element Element::derivation(int axis) const {
  if (is_neutral()) return *this;
  if (axis < 0 || axis >= alg_->axes()) throw std::out_of_range("derivation axis");
  if (is_grid()) return from_grid(alg_, grid_.derivative(axis));
  Element e(alg_);
  Scalar i = alg_->imag_unit();
  for (const auto& [n, c] : terms_) {
    long long k = alg_->representative(axis == 0 ? n.n1 : n.n2);
    if (k == 0) continue;
    e.terms_.push_back({n, c * i * alg_->from_int(k)});
  }
  return e;
}

std::vector<std::pair<Degree, Element>> Element::homogeneous_parts() const {
  std::vector<std::pair<Degree, Element>> out;
  if (is_neutral()) return out;
  if (is_grid()) {
    if (!is_zero()) out.push_back({Degree{}, *this});
    return out;
  }
  for (const auto& [d, c] : terms_) out.push_back({d, monomial(alg_, d, c)});
  return out;
}

Scalar Element::coefficient(Degree d) const {
  if (is_neutral()) return Scalar();
  if (is_grid()) {
    if (d != Degree{} || !grid_.is_constant()) throw std::invalid_argument("coefficient of a grid function");
    return Scalar(grid_.constant_value());
  }
  d = alg_->reduce(d);
  for (const auto& [n, c] : terms_)
    if (n == d) return c;
  return alg_->zero();
}

std::optional<Degree> Element::homogeneous_degree() const {
  if (is_neutral()) return std::nullopt;
  if (is_grid()) return Degree{};
  if (terms_.size() != 1) return std::nullopt;
  return terms_[0].first;
}

bool Element::is_zero() const {
  if (is_neutral()) return true;
  if (is_grid()) return grid_.is_zero();
  return terms_.empty();
}

bool Element::is_constant() const {
  if (is_neutral()) return true;
  if (is_grid()) return grid_.is_constant();
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == Degree{});
}

double Element::norm() const {
  if (is_neutral()) return 0.0;
  switch (alg_->backend()) {
    case Backend::grid: return grid_.sup_norm();
    case Backend::fuzzy: {
      if (terms_.empty()) return 0.0;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_matrix());
      return svd.singularValues()(0);
    }
    case Backend::laurent: {
      double s = 0;
      for (const auto& t : terms_) s += t.second.abs();
      return s;
    }
  }
  return 0.0;
}

double Element::max_abs() const {
  if (is_neutral()) return 0.0;
  if (is_grid()) return grid_.sup_norm();
  double m = 0;
  for (const auto& t : terms_) m = std::max(m, t.second.abs());
  return m;
}

Element Element::to_approx(const AlgebraPtr& target) const {
  if (is_neutral()) return Element(target);
  if (is_grid()) return from_grid(target, grid_);
  std::vector<Term> t;
  for (const auto& [d, c] : terms_) t.push_back({d, Scalar(c.to_complex())});
  return from_terms(target, std::move(t));
}

Eigen::MatrixXcd Element::to_matrix() const {
  if (!alg_ || alg_->backend() != Backend::fuzzy) throw std::invalid_argument("to_matrix needs a fuzzy element");
  const int q = alg_->modulus();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
  for (const auto& [d, c] : terms_) {
    Complex z = c.to_complex();
    for (int k = 0; k < q; ++k) {
      long long row = mod(k - d.n2, q);
      m(row, k) += z * alg_->lambda_power(d.n1 * (k - d.n2)).to_complex();
    }
  }
  return m;
}

Complex Element::value_at(size_t point) const {
  if (is_neutral()) return {};
  if (!is_grid()) throw std::invalid_argument("value_at needs a grid element");
  return grid_.value(point);
}

Element star_mul(const Element& a, const Element& b) { return a * b; }
Element star_adjoint(const Element& a) { return a.adjoint(); }
Element derivation(int axis, const Element& a) { return a.derivation(axis); }

}  // namespace lcw

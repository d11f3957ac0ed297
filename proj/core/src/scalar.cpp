#include "lcw/scalar.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lcw {

namespace {

using i128 = __int128;

std::vector<long long> poly_divide_exact(std::vector<long long> num, const std::vector<long long>& den) {
  // den is monic; coefficients are lowest degree first
  const size_t dn = den.size() - 1;
  std::vector<long long> q(num.size() - dn, 0);
  for (size_t i = num.size(); i-- > dn;) {
    long long c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return q;
}

bool fits64(i128 v) { return v >= INT64_MIN && v <= INT64_MAX; }

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::vector<long long> cyclotomic_polynomial(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<long long>> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
  }
  std::vector<long long> p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divide_exact(p, cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(mu);
  memo[n] = p;
  return p;
}

const CyclotomicField& CyclotomicField::get(int order) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CyclotomicField>> fields;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = fields[order];
  if (!slot) slot.reset(new CyclotomicField(order));
  return *slot;
}

CyclotomicField::CyclotomicField(int order) : order_(order) {
  phi_ = cyclotomic_polynomial(order);
  degree_ = static_cast<int>(phi_.size()) - 1;
  powers_.resize(order);
  std::vector<long long> cur(degree_, 0);
  cur[0] = 1;
  if (degree_ == 1) cur[0] = 1;
  for (int k = 0; k < order; ++k) {
    powers_[k] = cur;
    // multiply by x and reduce with the monic Phi
    std::vector<long long> next(degree_, 0);
    long long top = cur[degree_ - 1];
    for (int i = degree_ - 1; i > 0; --i) next[i] = cur[i - 1];
    next[0] = 0;
    if (top != 0)
      for (int i = 0; i < degree_; ++i) next[i] -= top * phi_[i];
    cur = next;
  }
  for (const auto& p : powers_)
    for (long long c : p) max_coeff_ = std::max(max_coeff_, std::llabs(c));
  roots_.resize(order);
  for (int k = 0; k < order; ++k) {
    double a = 2.0 * std::numbers::pi * k / order;
    roots_[k] = Complex(std::cos(a), std::sin(a));
  }
}

const std::vector<long long>& CyclotomicField::power(long long k) const {
  long long m = k % order_;
  if (m < 0) m += order_;
  return powers_[static_cast<size_t>(m)];
}

Complex CyclotomicField::root(long long k) const {
  long long m = k % order_;
  if (m < 0) m += order_;
  return roots_[static_cast<size_t>(m)];
}

// ---- Cyclo ----

Cyclo::Cyclo(const CyclotomicField& f) : f_(&f), num_(f.degree(), 0), den_(1) {}

Cyclo Cyclo::integer(const CyclotomicField& f, long long n) {
  Cyclo c(f);
  c.num_[0] = n;
  return c;
}

Cyclo Cyclo::rational(const CyclotomicField& f, const Rational& r) {
  std::vector<Rational> c(f.degree(), 0);
  c[0] = r;
  return from_big(f, std::move(c));
}

Cyclo Cyclo::root(const CyclotomicField& f, long long k) {
  Cyclo c(f);
  const auto& p = f.power(k);
  for (int i = 0; i < f.degree(); ++i) c.num_[i] = p[i];
  return c;
}

Cyclo Cyclo::from_coefficients(const CyclotomicField& f, const std::vector<Rational>& coeffs) {
  std::vector<Rational> acc(f.degree(), 0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    const auto& p = f.power(static_cast<long long>(k));
    for (int i = 0; i < f.degree(); ++i)
      if (p[i] != 0) acc[i] += coeffs[k] * static_cast<long>(p[i]);
  }
  return from_big(f, std::move(acc));
}

void Cyclo::normalize_small() {
  long long g = den_;
  for (long long v : num_) g = std::gcd(g, v);
  if (g == 0) g = 1;
  if (den_ < 0) g = -g;
  if (g != 1) {
    for (auto& v : num_) v /= g;
    den_ /= g;
  }
  bool zero = true;
  for (long long v : num_) zero = zero && v == 0;
  if (zero) den_ = 1;
}

Cyclo Cyclo::from_big(const CyclotomicField& f, std::vector<Rational> c) {
  for (auto& r : c) r.canonicalize();
  // try the small form: common denominator must fit, and so must every numerator
  mpz_class den = 1;
  for (const auto& r : c) den = lcm(den, mpz_class(r.get_den()));
  bool small = den.fits_slong_p();
  Cyclo out(f);
  if (small) {
    for (int i = 0; i < f.degree() && small; ++i) {
      mpz_class n = c[i].get_num() * (den / c[i].get_den());
      if (!n.fits_slong_p()) small = false;
      else out.num_[i] = n.get_si();
    }
  }
  if (small) {
    out.den_ = den.get_si();
    out.normalize_small();
    return out;
  }
  out.num_.clear();
  out.den_ = 1;
  out.big_ = std::make_shared<const std::vector<Rational>>(std::move(c));
  return out;
}

std::vector<Rational> Cyclo::to_big() const {
  if (big_) return *big_;
  std::vector<Rational> c(f_->degree());
  for (int i = 0; i < f_->degree(); ++i) {
    c[i] = Rational(mpz_class(static_cast<long>(num_[i])), mpz_class(static_cast<long>(den_)));
    c[i].canonicalize();
  }
  return c;
}

std::vector<Rational> Cyclo::coefficients() const {
  if (!f_) return {};
  return to_big();
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  if (!f_) return o;
  if (!o.f_) return *this;
  if (f_ != o.f_) throw std::invalid_argument("cyclotomic field mismatch");
  if (!big_ && !o.big_) {
    i128 g = std::gcd(den_, o.den_);
    i128 ma = o.den_ / g, mb = den_ / g;
    i128 l = static_cast<i128>(den_) * ma;
    bool ok = fits64(l);
    Cyclo r(*f_);
    for (int i = 0; i < f_->degree() && ok; ++i) {
      i128 v = static_cast<i128>(num_[i]) * ma + static_cast<i128>(o.num_[i]) * mb;
      if (!fits64(v)) ok = false;
      else r.num_[i] = static_cast<long long>(v);
    }
    if (ok) {
      r.den_ = static_cast<long long>(l);
      r.normalize_small();
      return r;
    }
  }
  auto a = to_big();
  auto b = o.to_big();
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return from_big(*f_, std::move(a));
}

Cyclo Cyclo::operator-() const {
  if (!f_) return *this;
  if (!big_) {
    Cyclo r = *this;
    for (auto& v : r.num_) v = -v;
    return r;
  }
  auto a = to_big();
  for (auto& v : a) v = -v;
  return from_big(*f_, std::move(a));
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
  if (!f_) return *this;
  if (!o.f_) return o;
  if (f_ != o.f_) throw std::invalid_argument("cyclotomic field mismatch");
  const int n = f_->degree();
  if (!big_ && !o.big_) {
    // bound |a_i b_j| * n * (reduction growth) well inside 127 bits
    auto bits = [](long long v) { return 64 - __builtin_clzll(static_cast<unsigned long long>(std::llabs(v)) | 1ULL); };
    int ba = 0, bb = 0;
    for (int i = 0; i < n; ++i) {
      ba = std::max(ba, bits(num_[i]));
      bb = std::max(bb, bits(o.num_[i]));
    }
    int slack = 2 * (64 - __builtin_clzll(static_cast<unsigned long long>(n))) +
                (64 - __builtin_clzll(static_cast<unsigned long long>(f_->max_reduction_coefficient()))) + 2;
    i128 den = static_cast<i128>(den_) * o.den_;
    if (ba + bb + slack < 126) {
      std::vector<i128> prod(2 * n - 1, 0);
      for (int i = 0; i < n; ++i) {
        if (num_[i] == 0) continue;
        for (int j = 0; j < n; ++j) prod[i + j] += static_cast<i128>(num_[i]) * o.num_[j];
      }
      std::vector<i128> acc(prod.begin(), prod.begin() + n);
      for (int k = n; k < 2 * n - 1; ++k) {
        if (prod[k] == 0) continue;
        const auto& p = f_->power(k);
        for (int i = 0; i < n; ++i) acc[i] += prod[k] * p[i];
      }
      i128 g = den;
      for (i128 v : acc) g = gcd128(g, v);
      if (g == 0) g = 1;
      bool ok = fits64(den / g);
      Cyclo r(*f_);
      for (int i = 0; i < n && ok; ++i) {
        i128 v = acc[i] / g;
        if (!fits64(v)) ok = false;
        else r.num_[i] = static_cast<long long>(v);
      }
      if (ok) {
        r.den_ = static_cast<long long>(den / g);
        r.normalize_small();
        return r;
      }
    }
  }
  auto a = to_big();
  auto b = o.to_big();
  std::vector<Rational> prod(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (b[j] != 0) prod[i + j] += a[i] * b[j];
  }
  std::vector<Rational> acc(prod.begin(), prod.begin() + n);
  for (int k = n; k < 2 * n - 1; ++k) {
    if (prod[k] == 0) continue;
    const auto& p = f_->power(k);
    for (int i = 0; i < n; ++i)
      if (p[i] != 0) acc[i] += prod[k] * static_cast<long>(p[i]);
  }
  return from_big(*f_, std::move(acc));
}

bool Cyclo::operator==(const Cyclo& o) const {
  if (!f_ || !o.f_) return is_zero() && o.is_zero();
  if (f_ != o.f_) return false;
  if (!big_ && !o.big_) return den_ == o.den_ && num_ == o.num_;
  if (big_ && o.big_) return *big_ == *o.big_;
  return false;
}

bool Cyclo::is_zero() const {
  if (!f_) return true;
  if (big_) return false;  // a big value is never zero (zero always has a small form)
  for (long long v : num_)
    if (v != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  if (!f_) return true;
  if (big_) {
    for (size_t i = 1; i < big_->size(); ++i)
      if ((*big_)[i] != 0) return false;
    return true;
  }
  for (size_t i = 1; i < num_.size(); ++i)
    if (num_[i] != 0) return false;
  return true;
}

Rational Cyclo::rational_part() const {
  if (!f_) return 0;
  if (big_) return (*big_)[0];
  Rational r{mpz_class(static_cast<long>(num_[0])), mpz_class(static_cast<long>(den_))};
  r.canonicalize();
  return r;
}

Cyclo Cyclo::conj() const {
  if (!f_) return *this;
  const int n = f_->degree();
  if (!big_) {
    std::vector<i128> acc(n, 0);
    for (int k = 0; k < n; ++k) {
      if (num_[k] == 0) continue;
      const auto& p = f_->power(-k);
      for (int i = 0; i < n; ++i) acc[i] += static_cast<i128>(num_[k]) * p[i];
    }
    bool ok = true;
    Cyclo r(*f_);
    for (int i = 0; i < n && ok; ++i) {
      if (!fits64(acc[i])) ok = false;
      else r.num_[i] = static_cast<long long>(acc[i]);
    }
    if (ok) {
      r.den_ = den_;
      r.normalize_small();
      return r;
    }
  }
  auto a = to_big();
  std::vector<Rational> acc(n, 0);
  for (int k = 0; k < n; ++k) {
    if (a[k] == 0) continue;
    const auto& p = f_->power(-k);
    for (int i = 0; i < n; ++i)
      if (p[i] != 0) acc[i] += a[k] * static_cast<long>(p[i]);
  }
  return from_big(*f_, std::move(acc));
}

Cyclo Cyclo::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const int n = f_->degree();
  // columns: a * x^j reduced; solve M y = e_0
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, 0));
  for (int j = 0; j < n; ++j) {
    Cyclo col = *this * root(*f_, j);
    auto c = col.to_big();
    for (int i = 0; i < n; ++i) m[i][j] = c[i];
  }
  m[0][n] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("singular multiplication matrix");
    std::swap(m[piv], m[col]);
    Rational inv = 1 / m[col][col];
    for (int k = col; k <= n; ++k) m[col][k] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational fac = m[r][col];
      for (int k = col; k <= n; ++k) m[r][k] -= fac * m[col][k];
    }
  }
  std::vector<Rational> y(n);
  for (int i = 0; i < n; ++i) y[i] = m[i][n];
  Cyclo out(*f_);
  for (int j = 0; j < n; ++j)
    if (y[j] != 0) out += Cyclo::rational(*f_, y[j]) * root(*f_, j);
  return out;
}

Complex Cyclo::to_complex() const {
  if (!f_) return {};
  Complex z{};
  if (big_) {
    for (size_t k = 0; k < big_->size(); ++k)
      if ((*big_)[k] != 0) z += (*big_)[k].get_d() * f_->root(static_cast<long long>(k));
    return z;
  }
  for (size_t k = 0; k < num_.size(); ++k)
    if (num_[k] != 0) z += static_cast<double>(num_[k]) * f_->root(static_cast<long long>(k));
  return z / static_cast<double>(den_);
}

// ---- Scalar ----

namespace {

[[noreturn]] void kind_mismatch() { throw std::invalid_argument("mixing exact and approximate scalars"); }

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
  if (is_neutral()) return o;
  if (o.is_neutral()) return *this;
  if (is_exact() && o.is_exact()) return Scalar(exact() + o.exact());
  if (is_approx() && o.is_approx()) return Scalar(approx() + o.approx());
  kind_mismatch();
}

Scalar Scalar::operator-() const {
  if (is_neutral()) return *this;
  if (is_exact()) return Scalar(-exact());
  return Scalar(-approx());
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_neutral()) return *this;
  if (o.is_neutral()) return o;
  if (is_exact() && o.is_exact()) return Scalar(exact() * o.exact());
  if (is_approx() && o.is_approx()) return Scalar(approx() * o.approx());
  kind_mismatch();
}

bool Scalar::operator==(const Scalar& o) const {
  if (is_neutral() || o.is_neutral()) return is_zero() && o.is_zero();
  if (is_exact() && o.is_exact()) return exact() == o.exact();
  if (is_approx() && o.is_approx()) return approx() == o.approx();
  return false;
}

Scalar Scalar::conj() const {
  if (is_neutral()) return *this;
  if (is_exact()) return Scalar(exact().conj());
  return Scalar(std::conj(approx()));
}

Scalar Scalar::inverse() const {
  if (is_neutral()) throw std::domain_error("inverse of zero");
  if (is_exact()) return Scalar(exact().inverse());
  if (approx() == Complex{}) throw std::domain_error("inverse of zero");
  return Scalar(1.0 / approx());
}

bool Scalar::is_zero() const {
  if (is_neutral()) return true;
  if (is_exact()) return exact().is_zero();
  return approx() == Complex{};
}

Complex Scalar::to_complex() const {
  if (is_neutral()) return {};
  if (is_exact()) return exact().to_complex();
  return approx();
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace lcw

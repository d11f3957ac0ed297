#pragma once

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lcw {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Q(zeta_M) presented as Q[x]/Phi_M(x) with power basis 1, x, ..., x^{phi(M)-1}.
class CyclotomicField {
public:
  static const CyclotomicField& get(int order);

  int order() const { return order_; }
  int degree() const { return degree_; }
  const std::vector<long long>& minimal_polynomial() const { return phi_; }

  // x^k reduced modulo Phi_M (k is taken modulo M).
  const std::vector<long long>& power(long long k) const;
  Complex root(long long k) const;
  long long max_reduction_coefficient() const { return max_coeff_; }

  CyclotomicField(const CyclotomicField&) = delete;
  CyclotomicField& operator=(const CyclotomicField&) = delete;

private:
  explicit CyclotomicField(int order);

  int order_;
  int degree_;
  long long max_coeff_ = 1;
  std::vector<long long> phi_;
  std::vector<std::vector<long long>> powers_;
  std::vector<Complex> roots_;
};

std::vector<long long> cyclotomic_polynomial(int n);

// Element of a cyclotomic field. Small values live in machine integers over a common
// denominator; anything that would overflow moves to GMP rationals. Both forms are
// canonical, and a value is stored big only when it has no small form.
class Cyclo {
public:
  Cyclo() = default;
  explicit Cyclo(const CyclotomicField& f);

  static Cyclo rational(const CyclotomicField& f, const Rational& r);
  static Cyclo integer(const CyclotomicField& f, long long n);
  static Cyclo root(const CyclotomicField& f, long long k);
  static Cyclo from_coefficients(const CyclotomicField& f, const std::vector<Rational>& c);

  const CyclotomicField* field() const { return f_; }

  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
  Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
  Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
  bool operator==(const Cyclo& o) const;

  Cyclo conj() const;
  Cyclo inverse() const;
  bool is_zero() const;
  bool is_rational() const;
  Rational rational_part() const;
  std::vector<Rational> coefficients() const;
  Complex to_complex() const;
  bool is_small() const { return !big_; }

private:
  using Nums = boost::container::small_vector<long long, 12>;

  const CyclotomicField* f_ = nullptr;
  Nums num_;
  long long den_ = 1;
  std::shared_ptr<const std::vector<Rational>> big_;

  static Cyclo from_big(const CyclotomicField& f, std::vector<Rational> c);
  std::vector<Rational> to_big() const;
  void normalize_small();
};

// Exact cyclotomic value or complex double. A default-constructed Scalar is a neutral
// zero that adopts the kind of whatever it is combined with.
class Scalar {
public:
  Scalar() = default;
  Scalar(const Cyclo& c) : v_(c) {}
  Scalar(Complex z) : v_(z) {}
  Scalar(double x) : v_(Complex(x, 0.0)) {}

  bool is_neutral() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_exact() const { return std::holds_alternative<Cyclo>(v_); }
  bool is_approx() const { return std::holds_alternative<Complex>(v_); }
  const Cyclo& exact() const { return std::get<Cyclo>(v_); }
  Complex approx() const { return std::get<Complex>(v_); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  bool operator==(const Scalar& o) const;

  Scalar conj() const;
  Scalar inverse() const;
  bool is_zero() const;
  Complex to_complex() const;
  double abs() const { return std::abs(to_complex()); }

private:
  std::variant<std::monostate, Cyclo, Complex> v_;
};

std::string to_string(const Rational& r);

}  // namespace lcw

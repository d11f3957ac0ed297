#pragma once

#include "lcw/grid.hpp"
#include "lcw/scalar.hpp"

#include <Eigen/Dense>

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcw {

enum class Backend { laurent, fuzzy, grid };
enum class FieldKind { exact, approx };

std::string to_string(Backend b);

struct Degree {
  long long n1 = 0;
  long long n2 = 0;

  friend Degree operator+(Degree a, Degree b) { return {a.n1 + b.n1, a.n2 + b.n2}; }
  friend Degree operator-(Degree a, Degree b) { return {a.n1 - b.n1, a.n2 - b.n2}; }
  friend Degree operator-(Degree a) { return {-a.n1, -a.n2}; }
  friend auto operator<=>(const Degree&, const Degree&) = default;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// Parameters of one torus-type *-algebra: the deformation λ = e^{2πiθ}, the backend and
// the scalar field. Immutable.
class Algebra {
public:
  static AlgebraPtr laurent(const Rational& theta, FieldKind field);
  static AlgebraPtr laurent_irrational(double theta);
  // M_q generated by clock and shift; θ = p/q with gcd(p, q) = 1
  static AlgebraPtr fuzzy(int q, int p, FieldKind field);
  static AlgebraPtr grid(std::vector<int> sizes);

  Backend backend() const { return backend_; }
  FieldKind field() const { return field_; }
  bool exact() const { return field_ == FieldKind::exact; }
  int axes() const;
  int modulus() const { return backend_ == Backend::fuzzy ? q_ : 0; }
  const std::optional<Rational>& theta() const { return theta_; }
  double theta_value() const { return theta_double_; }
  const CyclotomicField* cyclotomic() const { return cyclo_; }
  const GridShapePtr& grid_shape() const { return shape_; }
  std::string describe() const;

  Degree reduce(Degree d) const;
  // symmetric representative in (-q/2, q/2] on the fuzzy backend, identity otherwise
  long long representative(long long n) const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long n) const;
  Scalar from_rational(const Rational& r) const;
  Scalar from_complex(Complex z) const;  // approx fields only
  Scalar imag_unit() const;
  Scalar lambda_power(long long e) const;
  // Θ(m, n) = λ^{m2 n1 - n2 m1}
  Scalar theta_phase(Degree m, Degree n) const;

  bool compatible(const Algebra& o) const;

private:
  Algebra() = default;

  Backend backend_ = Backend::laurent;
  FieldKind field_ = FieldKind::exact;
  std::optional<Rational> theta_;
  double theta_double_ = 0.0;
  int q_ = 1;   // denominator of θ (and matrix size on the fuzzy backend)
  long long p_ = 0;
  const CyclotomicField* cyclo_ = nullptr;
  GridShapePtr shape_;
};

// Element of a graded torus algebra. Laurent and fuzzy elements are finite sums of
// monomials U^n (fuzzy degrees taken mod q, U^{(a,b)} = C^a S^b); grid elements are
// sampled functions. The default-constructed element is a neutral zero.
class Element {
public:
  using Term = std::pair<Degree, Scalar>;

  Element() = default;
  explicit Element(AlgebraPtr a);
  static Element constant(AlgebraPtr a, const Scalar& c);
  static Element monomial(AlgebraPtr a, Degree d, const Scalar& c);
  static Element from_terms(AlgebraPtr a, std::vector<Term> terms);
  static Element from_grid(AlgebraPtr a, GridFunction f);
  static Element from_matrix(AlgebraPtr a, const Eigen::MatrixXcd& m);

  const AlgebraPtr& algebra() const { return alg_; }
  bool is_neutral() const { return !alg_; }
  const std::vector<Term>& terms() const { return terms_; }
  const GridFunction& grid() const { return grid_; }
  bool is_grid() const { return alg_ && alg_->backend() == Backend::grid; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  // deformed product S*T = λ^{n2(S) n1(T)} ST
  Element operator*(const Element& o) const;
  Element operator*(const Scalar& c) const;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  bool operator==(const Element& o) const;

  // S† = λ^{n1 n2} S^*
  Element adjoint() const;
  // Σ_n Θ(n, d) b_n: the coefficient produced by moving b to the right of a degree-d form
  Element twist(Degree d) const;
  Element derivation(int axis) const;
  std::vector<std::pair<Degree, Element>> homogeneous_parts() const;
  Scalar coefficient(Degree d) const;
  // the single degree of a nonzero homogeneous element
  std::optional<Degree> homogeneous_degree() const;

  bool is_zero() const;
  bool is_constant() const;
  // fuzzy: spectral norm; grid: sup norm; Laurent: l1 norm of the coefficients
  double norm() const;
  double max_abs() const;
  // embed an exact element into the approximate field of the same backend
  Element to_approx(const AlgebraPtr& target) const;
  Eigen::MatrixXcd to_matrix() const;
  Complex value_at(size_t point) const;  // grid only

private:
  AlgebraPtr alg_;
  std::vector<Term> terms_;  // sorted by degree, nonzero coefficients
  GridFunction grid_;
};

Element star_mul(const Element& a, const Element& b);
Element star_adjoint(const Element& a);
Element derivation(int axis, const Element& a);
Scalar theta_phase(const Algebra& alg, Degree m, Degree n);

}  // namespace lcw

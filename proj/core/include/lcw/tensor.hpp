#pragma once

#include "lcw/algebra.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <vector>

namespace lcw {

// Dense matrix of algebra elements (gram, dagger data, presentations).
class ElemMatrix {
public:
  ElemMatrix() = default;
  ElemMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Element& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Element& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Element> a_;
};

class Frame;
class ModuleOperator;
class TensorElement;
using FramePtr = std::shared_ptr<const Frame>;

// A finite right frame (ω_j) of the one-forms: homogeneous degrees, the Gram matrix
// g_ij = <ω_i, ω_j> and dagger data ω_j† = Σ_i ω_i D_ij (columns in canonical coordinates).
//
// Tensors in T^k are stored in canonical coordinates c_I = <ω_I, t>. The identity of T^k
// is then the product Gram matrix G_k, which differs from the literal identity for
// overcomplete frames.
class Frame : public std::enable_shared_from_this<Frame> {
public:
  static constexpr int kMaxRank = 4;

  static FramePtr make(AlgebraPtr alg, std::vector<Degree> degrees, ElemMatrix gram, ElemMatrix dagger);

  const AlgebraPtr& algebra() const { return alg_; }
  int size() const { return static_cast<int>(degrees_.size()); }
  Degree degree(int j) const { return degrees_[j]; }
  const std::vector<Degree>& degrees() const { return degrees_; }
  const ElemMatrix& gram() const { return gram_; }
  const ElemMatrix& dagger() const { return dagger_; }
  // H_jm = <ω_j†, ω_m>
  const ElemMatrix& dagger_pairing() const { return hpair_; }
  bool orthonormal() const { return orthonormal_; }

  size_t dimension(int rank) const;
  std::vector<int> unflatten(size_t flat, int rank) const;
  // total degree of ω_I
  Degree degree_of(size_t flat, int rank) const;

  const ModuleOperator& identity(int rank) const;
  const TensorElement& basis_dagger(size_t flat, int rank) const;

  Frame(const Frame&) = delete;
  Frame& operator=(const Frame&) = delete;

private:
  Frame() = default;
  void build_identity(int rank) const;
  void build_daggers(int rank) const;

  AlgebraPtr alg_;
  std::vector<Degree> degrees_;
  ElemMatrix gram_;
  ElemMatrix dagger_;
  ElemMatrix hpair_;
  bool orthonormal_ = false;

  mutable std::array<std::once_flag, kMaxRank + 1> id_once_;
  mutable std::array<std::unique_ptr<ModuleOperator>, kMaxRank + 1> id_;
  mutable std::array<std::once_flag, kMaxRank + 1> dag_once_;
  mutable std::array<std::vector<TensorElement>, kMaxRank + 1> dag_;
};

// Element of T^k in canonical right coordinates.
class TensorElement {
public:
  TensorElement() = default;
  TensorElement(FramePtr f, int rank);
  // raw coordinates t = Σ ω_I x_I, canonicalized
  static TensorElement from_coordinates(FramePtr f, int rank, std::vector<Element> raw);
  // coordinates already canonical (no projection applied)
  static TensorElement from_canonical(FramePtr f, int rank, std::vector<Element> c);
  // ω_I · b
  static TensorElement basis(FramePtr f, const std::vector<int>& idx, const Element& b = Element());

  const FramePtr& frame() const { return f_; }
  int rank() const { return rank_; }
  size_t size() const { return c_.size(); }
  const Element& operator[](size_t i) const { return c_[i]; }
  const std::vector<Element>& coefficients() const { return c_; }
  bool valid() const { return static_cast<bool>(f_); }

  TensorElement operator+(const TensorElement& o) const;
  TensorElement operator-(const TensorElement& o) const;
  TensorElement operator-() const;
  // right module action t·b
  TensorElement operator*(const Element& b) const;
  TensorElement operator*(const Scalar& s) const;
  TensorElement& operator+=(const TensorElement& o) { return *this = *this + o; }
  TensorElement& operator-=(const TensorElement& o) { return *this = *this - o; }
  // literal equality of canonical coordinates
  bool operator==(const TensorElement& o) const;

  bool is_zero() const;
  double max_abs() const;
  TensorElement to_approx(const FramePtr& target) const;

private:
  FramePtr f_;
  int rank_ = 0;
  std::vector<Element> c_;
};

// Right-module endomorphism of T^k stored as its canonical matrix C_IJ = <ω_I, M ω_J>
// in sparse rows.
class ModuleOperator {
public:
  using Entry = std::pair<int, Element>;
  using Row = std::vector<Entry>;

  ModuleOperator() = default;
  ModuleOperator(FramePtr f, int rank);
  // M(ω_J) = Σ_I ω_I M_IJ given by raw rows; canonicalized to G_k M
  static ModuleOperator from_raw(FramePtr f, int rank, std::vector<Row> rows);
  static ModuleOperator from_canonical(FramePtr f, int rank, std::vector<Row> rows);

  const FramePtr& frame() const { return f_; }
  int rank() const { return rank_; }
  size_t dimension() const { return rows_.size(); }
  const Row& row(size_t i) const { return rows_[i]; }
  const std::vector<Row>& rows() const { return rows_; }
  Element entry(size_t i, size_t j) const;
  size_t nonzeros() const;

  TensorElement apply(const TensorElement& t) const;
  // (*this) ∘ o
  ModuleOperator compose(const ModuleOperator& o) const;
  ModuleOperator adjoint() const;

  ModuleOperator operator+(const ModuleOperator& o) const;
  ModuleOperator operator-(const ModuleOperator& o) const;
  ModuleOperator operator*(const Scalar& s) const;
  bool operator==(const ModuleOperator& o) const;
  bool is_zero() const;
  double max_abs() const;
  bool is_constant() const;

private:
  FramePtr f_;
  int rank_ = 0;
  std::vector<Row> rows_;
};

// ---- tensor calculus on a frame ----

TensorElement tensor(const TensorElement& s, const TensorElement& t);
TensorElement tensor_dagger(const TensorElement& t);
// b·t, pushed to the right through the Θ-commutation rule
TensorElement left_mul(const Element& b, const TensorElement& t);
Element inner_product(const TensorElement& s, const TensorElement& t);
// <x, T> for x in T^1 and T = Σ_a ω_a ⊗ η_a in T^k: Σ_a <x, ω_a> η_a
TensorElement pair_first(const TensorElement& x, const TensorElement& t);

// α(A)(ω_m) for each m; A in T^{k+1}, columns in T^k
std::vector<TensorElement> alpha_right(const TensorElement& a);
TensorElement alpha_right_apply(const TensorElement& a, const TensorElement& x);
// Σ_m T(ω_m) ⊗ ω_m†
TensorElement alpha_right_inv(const std::vector<TensorElement>& columns);
// left-linear companion: ←α(x ⊗ Y)(w) = <w†, x> Y, evaluated on ω_m
std::vector<TensorElement> alpha_left(const TensorElement& a);

ModuleOperator sigma_theta(const FramePtr& f);
ModuleOperator psi_from_braiding(const ModuleOperator& sigma);
ModuleOperator braiding_from_psi(const ModuleOperator& psi);
// op ⊗ 1 and 1 ⊗ op on T^{k+1} for op on T^k (k = 2 gives P and Q)
ModuleOperator extend_right(const ModuleOperator& op);
ModuleOperator extend_left(const ModuleOperator& op);

}  // namespace lcw

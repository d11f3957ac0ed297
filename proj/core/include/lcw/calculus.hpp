#pragma once

#include "lcw/tensor.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcw {

// Coordinate presentation of a frame: <dx^μ, dx^ν> = h^{μν} with (dx^μ)† = -dx^μ, and
// ω_j = Σ_μ dx^μ B_μj.
struct Presentation {
  ElemMatrix inverse_metric;  // h, axes x axes, central entries
  ElemMatrix expansion;       // B, axes x N
};

// Everything a geometry document can specify. Unset fields are derived from the
// presentation (or from the diagonal metric on the grid backend).
struct GeometryInput {
  std::string name;
  AlgebraPtr algebra;
  std::optional<Presentation> presentation;
  // grid backend: g_μμ of a diagonal coordinate metric; frame ω_μ = sqrt(g_μμ) dx^μ
  std::optional<std::vector<Element>> diagonal_metric;
  std::optional<std::vector<Degree>> degrees;
  std::optional<ElemMatrix> gram;
  std::optional<ElemMatrix> dagger;
  std::optional<ElemMatrix> coordinate_forms;
  std::optional<std::vector<ModuleOperator::Row>> psi;  // raw rows of an explicit Ψ
  std::optional<std::vector<std::vector<Element>>> frame_differentials;
  std::optional<std::vector<std::vector<Element>>> lifts;
};

// A Hermitian differential structure presented by a finite frame.
struct Geometry {
  std::string name;
  AlgebraPtr algebra;
  FramePtr frame;
  ModuleOperator psi;
  std::string psi_source;  // "sigma-theta" or "explicit"
  std::vector<TensorElement> frame_differentials;
  std::vector<TensorElement> lifts;  // empty when no lift data is known
  ElemMatrix coordinate_forms;       // dx^μ = Σ_j ω_j E_jμ; empty if unknown
  std::optional<Presentation> presentation;
  std::optional<std::vector<Element>> diagonal_metric;
  bool closed = false;

  int axes() const { return algebra->axes(); }
  double tolerance = 1e-10;  // approx backends only
};

using GeometryPtr = std::shared_ptr<const Geometry>;

GeometryPtr build_geometry(const GeometryInput& in);
// the same geometry over the approximate field (exact inputs only)
GeometryPtr to_approx(const GeometryPtr& g);

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  bool exact = false;
  std::string note;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool passed() const;
};

ValidationReport validate(const Geometry& g);

// algebra elements used to probe module identities
std::vector<Element> test_generators(const AlgebraPtr& alg);
// coordinate generator U_μ (e^{i x_μ} on the grid)
Element coordinate_unitary(const AlgebraPtr& alg, int axis);

bool near_zero(const TensorElement& t, double tol);
bool near_zero(const ModuleOperator& m, double tol);
bool near_zero(const Element& e, double tol);

TensorElement differential0(const Geometry& g, const Element& b);
// Σ_j ω_j ⊗ d(x_j) for canonical coordinates x_j
TensorElement grassmann_image(const Geometry& g, const TensorElement& x);
TensorElement exterior_d(const Geometry& g, const TensorElement& x);
TensorElement quantum_metric(const Geometry& g);
// ∇_T(d b) for each b
std::vector<TensorElement> junk_from_connection(const Geometry& g, const std::vector<Element>& bs);
// G_2 - Ψ
ModuleOperator lambda2_projection(const Geometry& g);

}  // namespace lcw

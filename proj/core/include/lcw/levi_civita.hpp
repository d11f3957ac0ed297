#pragma once

#include "lcw/calculus.hpp"
#include "lcw/projection.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcw {

// ∇ = ∇^v + α(A) relative to the geometry's frame.
struct Connection {
  GeometryPtr geometry;
  TensorElement A;
  std::string method;
};

// Evaluates ∇ and its conjugate, caching the columns of α(A).
class ConnectionEvaluator {
public:
  explicit ConnectionEvaluator(const Connection& c);
  TensorElement apply(const TensorElement& x) const;
  // ∇̄(x) = -(∇(x†))†
  TensorElement conjugate(const TensorElement& x) const;
  const Connection& connection() const { return c_; }

private:
  Connection c_;
  std::vector<TensorElement> cols_;
};

class HypothesisFailure : public std::runtime_error {
public:
  HypothesisFailure(const std::string& what, double residual) : std::runtime_error(what), residual(residual) {}
  double residual;
};

struct WTensors {
  TensorElement W;     // Σ_j d(ω_j) ⊗ ω_j†
  TensorElement Wdag;  // W†
};

Connection grassmann(const GeometryPtr& g);
WTensors compute_W(const Geometry& g);

struct SeriesInfo {
  long terms = 0;
  bool geometric_tail = false;
  double last_increment = 0.0;
};

// A = -Σ_k (PQ)^k (1-Π)(W + PW†)
Connection connection_form_series(const GeometryPtr& g, const ProjectionPair& pq, const TwoProjectionReport& rep,
                                  double tol = 1e-12, long max_iter = 10000, SeriesInfo* info = nullptr);
// A = -(1 + 4PQ)W, after checking the braid relation and W† = (2P-1)(2Q-1)W
Connection connection_form_closed(const GeometryPtr& g, const ProjectionPair& pq, double tol = 1e-10);

struct CertificationReport {
  bool hermitian = false;
  bool torsion_free = false;
  bool dag_concordant = false;
  bool bimodule = false;
  bool metric_compatible = false;
  std::map<std::string, double> residuals;
  bool exact = false;
  bool all() const { return hermitian && torsion_free && dag_concordant && bimodule && metric_compatible; }
};

CertificationReport certify(const Connection& c, const ProjectionPair& pq, double tol = 1e-10);

TensorElement torsion_tensor(const Connection& c, const ProjectionPair& pq);
// (1 ⊗ (1-Ψ))(∇ ⊗ 1 + 1 ⊗ d)∇(x)
TensorElement curvature(const Connection& c, const TensorElement& x);

// y_j given in the coordinates of the geometry's frame; B = Σ x_i ⊗ d<x_i, y_j> ⊗ y_j†
TensorElement frame_change_tensor(const Geometry& g, const std::vector<TensorElement>& w_frame);
// ∇^w(x) = Σ_j y_j ⊗ d<y_j, x>
TensorElement grassmann_image_in(const Geometry& g, const std::vector<TensorElement>& w_frame, const TensorElement& x);

struct ComparisonReport {
  TensorElement difference;  // (1-Π)(A1 - A2)
  bool equivalent = false;
  bool equal = false;
  double residual = 0.0;
};
ComparisonReport compare_mod_sym3(const Connection& c1, const Connection& c2, const ModuleOperator& pi, double tol = 1e-10);

struct BimoduleCorrection {
  bool solved = false;
  TensorElement B;
  double rhs_norm = 0.0;
  double residual = 0.0;
  size_t unknowns = 0;
  std::string note;
};
// solves (α + σ^{-1}∘←α)(B) = σ^{-1}∇̄⁰ - ∇⁰ on the frame
BimoduleCorrection bimodule_correction(const Connection& c0, const ModuleOperator& sigma, double tol = 1e-10);

}  // namespace lcw

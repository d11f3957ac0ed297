#pragma once

#include "lcw/flat.hpp"
#include "lcw/tensor.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace lcw {

enum class ProjectionMethod { automatic, iterative, group_average };

struct ProjectionPair {
  ModuleOperator P;  // Ψ ⊗ 1
  ModuleOperator Q;  // 1 ⊗ Ψ
};

ProjectionPair build_PQ(const ModuleOperator& psi);

class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, double residual) : std::runtime_error(what), residual(residual) {}
  double residual;
};

struct TwoProjectionReport {
  std::optional<ModuleOperator> pi;  // unset only for an iterative run over an exact field
  std::vector<Eigen::MatrixXcd> pi_flat;
  double friedrichs_angle = 0.0;
  bool concordant = false;
  std::string method;  // "group-average" or "iterative"
  long iterations = 0;
  double residual = 0.0;
  bool s3 = false;
  double pi_rank = 0.0;
  bool angle_from_group = false;
};

// (2P-1)(2Q-1)(2P-1) = (2Q-1)(2P-1)(2Q-1), literal on exact fields
bool braid_relation(const ModuleOperator& P, const ModuleOperator& Q, double tol, double* residual = nullptr);

TwoProjectionReport limit_projection(const ModuleOperator& P, const ModuleOperator& Q,
                                     ProjectionMethod method = ProjectionMethod::automatic, double tol = 1e-12,
                                     long max_iter = 10000);

double friedrichs_angle(const ModuleOperator& P, const ModuleOperator& Q, const ModuleOperator& pi);

// Elements of the rational group algebra Q[S3] acting through U = 2P-1, V = 2Q-1,
// indexed by the words e, U, V, UV, VU, UVU.
struct S3Element {
  std::array<Rational, 6> c;
};
S3Element s3_multiply(const S3Element& a, const S3Element& b);
S3Element s3_inverse(const S3Element& a);  // throws if singular
TensorElement s3_apply(const S3Element& g, const ModuleOperator& P, const ModuleOperator& Q, const TensorElement& t);

// (1 + Π - PQ)^{-1} t
TensorElement neumann_inverse(const ModuleOperator& P, const ModuleOperator& Q, const TwoProjectionReport& rep,
                              const TensorElement& t, double tol = 1e-12, long max_iter = 10000);

}  // namespace lcw

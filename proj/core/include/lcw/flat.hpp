#pragma once

#include "lcw/tensor.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lcw {

// Faithful finite-dimensional picture of operators on T^k.
//
// Fuzzy: C_IJ becomes the q x q block of a (q N^k)-dimensional matrix, split into the
// connected components of the joint sparsity pattern. Grid: one N^k matrix per grid
// point, or a single one when every entry is constant. Laurent has no such picture.
class FlatSpace {
public:
  static bool supported(const Frame& f);
  // partition fine enough that none of the given operators couples two blocks
  static FlatSpace build(const std::vector<const ModuleOperator*>& ops);

  size_t blocks() const { return index_.size(); }
  const std::vector<int>& block_index(size_t b) const { return index_[b]; }
  // grid: the sample point behind each block (empty when constant)
  bool pointwise() const { return pointwise_; }
  // matrix size before splitting
  size_t full_dimension() const { return full_dim_; }
  // normalization of traces: q for fuzzy, number of blocks for pointwise grid data, else 1
  double trace_scale() const { return trace_scale_; }

  std::vector<Eigen::MatrixXcd> flatten(const ModuleOperator& op) const;
  // back to an operator (approx algebras only)
  ModuleOperator unflatten(const std::vector<Eigen::MatrixXcd>& blocks, const FramePtr& f, int rank) const;

private:
  FramePtr f_;
  int rank_ = 0;
  bool fuzzy_ = false;
  bool pointwise_ = false;
  size_t full_dim_ = 0;
  double trace_scale_ = 1.0;
  std::vector<std::vector<int>> index_;
  std::vector<int> block_of_;  // full index -> block
  std::vector<int> local_;     // full index -> position in its block
};

double spectral_norm(const Eigen::MatrixXcd& m);
double max_spectral_norm(const std::vector<Eigen::MatrixXcd>& blocks);
double operator_norm(const ModuleOperator& op);
// ||<t, t>||^{1/2}: fuzzy spectral norm, grid sup over points, Laurent l1 proxy
double tensor_norm(const TensorElement& t);

}  // namespace lcw

#pragma once

#include "lcw/scalar.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace lcw {

class GridShape {
public:
  explicit GridShape(std::vector<int> sizes);

  int rank() const { return static_cast<int>(sizes_.size()); }
  int size(int axis) const { return sizes_[axis]; }
  const std::vector<int>& sizes() const { return sizes_; }
  size_t points() const { return points_; }
  // coordinate 2*pi*j/n of the point along an axis (row-major, last axis fastest)
  double coordinate(size_t point, int axis) const;
  bool operator==(const GridShape& o) const { return sizes_ == o.sizes_; }

private:
  std::vector<int> sizes_;
  std::vector<size_t> strides_;
  size_t points_;
};

using GridShapePtr = std::shared_ptr<const GridShape>;

struct TrigTerm {
  std::vector<int> k;
  Complex c;
};

// Complex samples of a function on the uniform torus grid.
//
// Per-axis band limits are tracked. A band limit strictly below Nyquist means the
// samples determine the function along that axis and spectral differentiation is
// exact. Products whose band would reach Nyquist keep their exact samples and carry a
// forward-mode derivative rule instead, so no derivative is ever taken of aliased data.
class GridFunction {
public:
  GridFunction();
  static GridFunction constant(Complex c);
  static GridFunction trig(const GridShapePtr& shape, const std::vector<TrigTerm>& terms);
  // band limits are detected from the spectrum; undetermined axes cannot be differentiated
  static GridFunction from_samples(const GridShapePtr& shape, std::vector<Complex> values);

  bool is_constant() const;
  Complex constant_value() const;
  Complex value(size_t point) const;
  const GridShapePtr& shape() const;
  const std::vector<Complex>& samples() const;
  // -1 marks an axis whose samples do not determine the function
  int band(int axis) const;
  bool has_rule() const;

  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;
  GridFunction operator-() const;
  GridFunction operator*(const GridFunction& o) const;
  GridFunction scaled(Complex c) const;
  GridFunction conj() const;
  GridFunction reciprocal() const;
  GridFunction sqrt() const;
  GridFunction derivative(int axis) const;

  bool is_zero() const;
  double sup_norm() const;

  struct Node;

private:
  explicit GridFunction(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static GridFunction make(const GridShapePtr& shape, std::vector<Complex> v, std::vector<int> band,
                           std::function<GridFunction(int)> rule);
  std::shared_ptr<const Node> n_;
};

// spectral derivative of band-limited samples along one axis
std::vector<Complex> spectral_derivative(const GridShape& shape, const std::vector<Complex>& v, int axis);

}  // namespace lcw

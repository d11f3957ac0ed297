#include "lcw/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lcw {

GridShape::GridShape(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("grid needs at least one axis");
  strides_.assign(sizes_.size(), 1);
  points_ = 1;
  for (size_t a = sizes_.size(); a-- > 0;) {
    if (sizes_[a] < 1) throw std::invalid_argument("grid sizes must be positive");
    strides_[a] = points_;
    points_ *= static_cast<size_t>(sizes_[a]);
  }
}

double GridShape::coordinate(size_t point, int axis) const {
  size_t j = (point / strides_[axis]) % static_cast<size_t>(sizes_[axis]);
  return 2.0 * std::numbers::pi * static_cast<double>(j) / sizes_[axis];
}

struct GridFunction::Node {
  GridShapePtr shape;  // null for constants
  Complex c{};
  std::vector<Complex> v;
  std::vector<int> band;
  std::function<GridFunction(int)> rule;
  mutable std::mutex mu;
  mutable std::vector<std::shared_ptr<const Node>> dcache;
};

namespace {

bool admissible(int band, int n) { return band >= 0 && 2 * band < n; }

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

struct FftBuffer {
  explicit FftBuffer(size_t n) : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftBuffer() { fftw_free(p); }
  fftw_complex* p;
};

void fft(const GridShape& shape, std::vector<Complex>& data, int sign) {
  const size_t n = shape.points();
  FftBuffer buf(n);
  for (size_t i = 0; i < n; ++i) {
    buf.p[i][0] = data[i].real();
    buf.p[i][1] = data[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft(shape.rank(), shape.sizes().data(), buf.p, buf.p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  for (size_t i = 0; i < n; ++i) data[i] = Complex(buf.p[i][0], buf.p[i][1]);
}

int wavenumber(size_t j, int n) {
  int jj = static_cast<int>(j);
  return 2 * jj < n ? jj : jj - n;
}

}  // namespace

std::vector<Complex> spectral_derivative(const GridShape& shape, const std::vector<Complex>& v, int axis) {
  std::vector<Complex> data = v;
  fft(shape, data, FFTW_FORWARD);
  const int n = shape.size(axis);
  size_t stride = 1;
  for (int a = shape.rank() - 1; a > axis; --a) stride *= static_cast<size_t>(shape.size(a));
  const double scale = 1.0 / static_cast<double>(shape.points());
  for (size_t i = 0; i < data.size(); ++i) {
    size_t j = (i / stride) % static_cast<size_t>(n);
    int k = wavenumber(j, n);
    if (2 * std::abs(k) == n) k = 0;
    data[i] *= Complex(0.0, static_cast<double>(k)) * scale;
  }
  fft(shape, data, FFTW_BACKWARD);
  return data;
}

GridFunction::GridFunction() : GridFunction(constant(Complex{})) {}

GridFunction GridFunction::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->c = c;
  return GridFunction(std::shared_ptr<const Node>(std::move(n)));
}

GridFunction GridFunction::make(const GridShapePtr& shape, std::vector<Complex> v, std::vector<int> band,
                                std::function<GridFunction(int)> rule) {
  auto n = std::make_shared<Node>();
  n->shape = shape;
  n->v = std::move(v);
  bool all = true;
  for (int a = 0; a < shape->rank(); ++a) all = all && admissible(band[a], shape->size(a));
  n->band = std::move(band);
  if (!all) n->rule = std::move(rule);
  n->dcache.resize(shape->rank());
  return GridFunction(std::shared_ptr<const Node>(std::move(n)));
}

GridFunction GridFunction::trig(const GridShapePtr& shape, const std::vector<TrigTerm>& terms) {
  std::vector<int> band(shape->rank(), 0);
  for (const auto& t : terms) {
    if (static_cast<int>(t.k.size()) != shape->rank()) throw std::invalid_argument("trig term rank mismatch");
    for (int a = 0; a < shape->rank(); ++a) band[a] = std::max(band[a], std::abs(t.k[a]));
  }
  for (int a = 0; a < shape->rank(); ++a)
    if (!admissible(band[a], shape->size(a)))
      throw std::invalid_argument("trigonometric polynomial exceeds the grid band limit");
  std::vector<Complex> v(shape->points());
  for (size_t p = 0; p < v.size(); ++p) {
    Complex s{};
    for (const auto& t : terms) {
      double ph = 0;
      for (int a = 0; a < shape->rank(); ++a) ph += t.k[a] * shape->coordinate(p, a);
      s += t.c * Complex(std::cos(ph), std::sin(ph));
    }
    v[p] = s;
  }
  return make(shape, std::move(v), std::move(band), nullptr);
}

GridFunction GridFunction::from_samples(const GridShapePtr& shape, std::vector<Complex> values) {
  if (values.size() != shape->points()) throw std::invalid_argument("sample count mismatch");
  std::vector<Complex> spec = values;
  fft(*shape, spec, FFTW_FORWARD);
  double mx = 0;
  for (auto z : spec) mx = std::max(mx, std::abs(z));
  std::vector<int> band(shape->rank(), 0);
  std::vector<size_t> strides(shape->rank(), 1);
  for (int a = shape->rank() - 2; a >= 0; --a) strides[a] = strides[a + 1] * static_cast<size_t>(shape->size(a + 1));
  for (size_t i = 0; i < spec.size(); ++i) {
    if (std::abs(spec[i]) <= 1e-12 * mx) continue;
    for (int a = 0; a < shape->rank(); ++a) {
      int k = wavenumber((i / strides[a]) % static_cast<size_t>(shape->size(a)), shape->size(a));
      band[a] = std::max(band[a], std::abs(k));
    }
  }
  for (int a = 0; a < shape->rank(); ++a)
    if (!admissible(band[a], shape->size(a))) band[a] = -1;
  return make(shape, std::move(values), std::move(band), nullptr);
}

bool GridFunction::is_constant() const { return !n_->shape; }
Complex GridFunction::constant_value() const { return n_->c; }
Complex GridFunction::value(size_t point) const { return n_->shape ? n_->v[point] : n_->c; }
const GridShapePtr& GridFunction::shape() const { return n_->shape; }
const std::vector<Complex>& GridFunction::samples() const { return n_->v; }
int GridFunction::band(int axis) const { return n_->shape ? n_->band[axis] : 0; }
bool GridFunction::has_rule() const { return static_cast<bool>(n_->rule); }

namespace {

const GridShapePtr& common_shape(const GridFunction& a, const GridFunction& b) {
  if (a.is_constant()) return b.shape();
  if (!b.is_constant() && !(*a.shape() == *b.shape())) throw std::invalid_argument("grid shape mismatch");
  return a.shape();
}

}  // namespace

GridFunction GridFunction::operator+(const GridFunction& o) const {
  if (is_constant() && o.is_constant()) return constant(n_->c + o.n_->c);
  const auto& shape = common_shape(*this, o);
  std::vector<Complex> v(shape->points());
  for (size_t p = 0; p < v.size(); ++p) v[p] = value(p) + o.value(p);
  std::vector<int> band(shape->rank());
  for (int a = 0; a < shape->rank(); ++a) {
    int x = this->band(a), y = o.band(a);
    band[a] = (x < 0 || y < 0) ? -1 : std::max(x, y);
  }
  GridFunction a = *this, b = o;
  return make(shape, std::move(v), std::move(band), [a, b](int axis) { return a.derivative(axis) + b.derivative(axis); });
}

GridFunction GridFunction::operator-() const { return scaled(Complex(-1.0, 0.0)); }

GridFunction GridFunction::operator-(const GridFunction& o) const { return *this + (-o); }

GridFunction GridFunction::scaled(Complex c) const {
  if (is_constant()) return constant(n_->c * c);
  std::vector<Complex> v(n_->v);
  for (auto& z : v) z *= c;
  GridFunction a = *this;
  return make(n_->shape, std::move(v), n_->band, [a, c](int axis) { return a.derivative(axis).scaled(c); });
}

GridFunction GridFunction::operator*(const GridFunction& o) const {
  if (is_constant()) return o.scaled(n_->c);
  if (o.is_constant()) return scaled(o.n_->c);
  const auto& shape = common_shape(*this, o);
  std::vector<Complex> v(shape->points());
  for (size_t p = 0; p < v.size(); ++p) v[p] = n_->v[p] * o.n_->v[p];
  std::vector<int> band(shape->rank());
  for (int a = 0; a < shape->rank(); ++a) {
    int x = this->band(a), y = o.band(a);
    band[a] = (x < 0 || y < 0) ? -1 : x + y;
    if (band[a] > 0 && !admissible(band[a], shape->size(a))) band[a] = -1;
  }
  GridFunction a = *this, b = o;
  return make(shape, std::move(v), std::move(band),
              [a, b](int axis) { return a.derivative(axis) * b + a * b.derivative(axis); });
}

GridFunction GridFunction::conj() const {
  if (is_constant()) return constant(std::conj(n_->c));
  std::vector<Complex> v(n_->v);
  for (auto& z : v) z = std::conj(z);
  GridFunction a = *this;
  return make(n_->shape, std::move(v), n_->band, [a](int axis) { return a.derivative(axis).conj(); });
}

GridFunction GridFunction::reciprocal() const {
  if (is_constant()) {
    if (n_->c == Complex{}) throw std::domain_error("reciprocal of zero");
    return constant(1.0 / n_->c);
  }
  auto n = std::make_shared<Node>();
  n->shape = n_->shape;
  n->v.resize(n_->v.size());
  for (size_t p = 0; p < n->v.size(); ++p) {
    if (n_->v[p] == Complex{}) throw std::domain_error("reciprocal of a function with a zero sample");
    n->v[p] = 1.0 / n_->v[p];
  }
  n->band.resize(n_->band.size());
  for (size_t a = 0; a < n->band.size(); ++a) n->band[a] = n_->band[a] == 0 ? 0 : -1;
  n->dcache.resize(n->band.size());
  GridFunction a = *this;
  std::weak_ptr<const Node> self = n;
  n->rule = [a, self](int axis) {
    GridFunction r(self.lock());
    return -(a.derivative(axis) * r * r);
  };
  return GridFunction(std::shared_ptr<const Node>(std::move(n)));
}

GridFunction GridFunction::sqrt() const {
  if (is_constant()) return constant(std::sqrt(n_->c));
  auto n = std::make_shared<Node>();
  n->shape = n_->shape;
  n->v.resize(n_->v.size());
  for (size_t p = 0; p < n->v.size(); ++p) n->v[p] = std::sqrt(n_->v[p]);
  n->band.resize(n_->band.size());
  for (size_t a = 0; a < n->band.size(); ++a) n->band[a] = n_->band[a] == 0 ? 0 : -1;
  n->dcache.resize(n->band.size());
  GridFunction a = *this;
  std::weak_ptr<const Node> self = n;
  n->rule = [a, self](int axis) {
    GridFunction s(self.lock());
    return (a.derivative(axis) * s.reciprocal()).scaled(0.5);
  };
  return GridFunction(std::shared_ptr<const Node>(std::move(n)));
}

GridFunction GridFunction::derivative(int axis) const {
  if (is_constant()) return constant(Complex{});
  if (axis < 0 || axis >= n_->shape->rank()) throw std::out_of_range("derivative axis");
  if (n_->band[axis] == 0) return constant(Complex{});
  {
    std::lock_guard<std::mutex> lock(n_->mu);
    if (n_->dcache[axis]) return GridFunction(n_->dcache[axis]);
  }
  GridFunction out;
  if (n_->rule) {
    out = n_->rule(axis);
  } else if (admissible(n_->band[axis], n_->shape->size(axis))) {
    out = make(n_->shape, spectral_derivative(*n_->shape, n_->v, axis), n_->band, nullptr);
  } else {
    throw std::domain_error("cannot differentiate grid data beyond its band limit");
  }
  std::lock_guard<std::mutex> lock(n_->mu);
  n_->dcache[axis] = out.n_;
  return out;
}

bool GridFunction::is_zero() const {
  if (is_constant()) return n_->c == Complex{};
  for (auto z : n_->v)
    if (z != Complex{}) return false;
  return true;
}

double GridFunction::sup_norm() const {
  if (is_constant()) return std::abs(n_->c);
  double m = 0;
  for (auto z : n_->v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace lcw

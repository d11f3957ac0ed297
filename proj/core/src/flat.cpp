#include "lcw/flat.hpp"

#include "lcw/parallel.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace lcw {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

constexpr double kPattern = 1e-15;

}  // namespace

bool FlatSpace::supported(const Frame& f) { return f.algebra()->backend() != Backend::laurent; }

FlatSpace FlatSpace::build(const std::vector<const ModuleOperator*>& ops) {
  if (ops.empty()) throw std::invalid_argument("no operators to flatten");
  FlatSpace s;
  s.f_ = ops[0]->frame();
  s.rank_ = ops[0]->rank();
  const AlgebraPtr& alg = s.f_->algebra();
  const size_t dim = ops[0]->dimension();
  if (alg->backend() == Backend::laurent) throw std::invalid_argument("the Laurent backend has no finite-dimensional norm");
  if (alg->backend() == Backend::grid) {
    bool constant = true;
    for (auto* op : ops) constant = constant && op->is_constant();
    s.full_dim_ = dim;
    size_t npts = constant ? 1 : alg->grid_shape()->points();
    s.pointwise_ = !constant;
    s.trace_scale_ = static_cast<double>(npts);
    std::vector<int> all(dim);
    std::iota(all.begin(), all.end(), 0);
    s.index_.assign(npts, all);
    return s;
  }
  const int q = alg->modulus();
  s.fuzzy_ = true;
  s.full_dim_ = dim * q;
  s.trace_scale_ = q;
  UnionFind uf(s.full_dim_);
  for (auto* op : ops)
    for (size_t i = 0; i < dim; ++i)
      for (const auto& [j, e] : op->row(i)) {
        Eigen::MatrixXcd m = e.to_matrix();
        for (int r = 0; r < q; ++r)
          for (int c = 0; c < q; ++c)
            if (std::abs(m(r, c)) > kPattern) uf.unite(static_cast<int>(i * q + r), static_cast<int>(j * q + c));
      }
  std::map<int, int> root_block;
  s.block_of_.assign(s.full_dim_, 0);
  s.local_.assign(s.full_dim_, 0);
  for (size_t u = 0; u < s.full_dim_; ++u) {
    int r = uf.find(static_cast<int>(u));
    auto it = root_block.find(r);
    if (it == root_block.end()) {
      it = root_block.emplace(r, static_cast<int>(s.index_.size())).first;
      s.index_.emplace_back();
    }
    s.block_of_[u] = it->second;
    s.local_[u] = static_cast<int>(s.index_[it->second].size());
    s.index_[it->second].push_back(static_cast<int>(u));
  }
  return s;
}

std::vector<Eigen::MatrixXcd> FlatSpace::flatten(const ModuleOperator& op) const {
  std::vector<Eigen::MatrixXcd> out(blocks());
  for (size_t b = 0; b < blocks(); ++b) {
    size_t n = index_[b].size();
    out[b] = Eigen::MatrixXcd::Zero(n, n);
  }
  const size_t dim = op.dimension();
  if (!fuzzy_) {
    parallel_for(blocks(), [&](size_t b) {
      for (size_t i = 0; i < dim; ++i)
        for (const auto& [j, e] : op.row(i)) {
          if (e.is_neutral()) continue;
          out[b](i, j) = pointwise_ ? e.value_at(b) : e.grid().is_constant() ? e.grid().constant_value() : e.value_at(0);
        }
    });
    return out;
  }
  const int q = f_->algebra()->modulus();
  for (size_t i = 0; i < dim; ++i)
    for (const auto& [j, e] : op.row(i)) {
      Eigen::MatrixXcd m = e.to_matrix();
      for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c) {
          if (std::abs(m(r, c)) == 0.0) continue;
          size_t u = i * q + r, v = j * q + c;
          if (block_of_[u] != block_of_[v]) {
            if (std::abs(m(r, c)) > kPattern) throw std::invalid_argument("operator couples blocks of the flat space");
            continue;
          }
          out[block_of_[u]](local_[u], local_[v]) += m(r, c);
        }
    }
  return out;
}

ModuleOperator FlatSpace::unflatten(const std::vector<Eigen::MatrixXcd>& blocks, const FramePtr& f, int rank) const {
  const AlgebraPtr& alg = f->algebra();
  if (alg->exact()) throw std::invalid_argument("unflatten needs an approximate algebra");
  const size_t dim = f->dimension(rank);
  std::vector<ModuleOperator::Row> rows(dim);
  if (!fuzzy_) {
    const size_t npts = blocks.size();
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) {
        bool nz = false;
        for (size_t p = 0; p < npts && !nz; ++p) nz = std::abs(blocks[p](i, j)) > kPattern;
        if (!nz) continue;
        Element e;
        if (!pointwise_) {
          e = Element::constant(alg, alg->from_complex(blocks[0](i, j)));
        } else {
          std::vector<Complex> v(npts);
          for (size_t p = 0; p < npts; ++p) v[p] = blocks[p](i, j);
          e = Element::from_grid(alg, GridFunction::from_samples(alg->grid_shape(), std::move(v)));
        }
        rows[i].push_back({static_cast<int>(j), e});
      }
    return ModuleOperator::from_canonical(f, rank, std::move(rows));
  }
  const int q = alg->modulus();
  std::map<std::pair<size_t, size_t>, Eigen::MatrixXcd> entries;
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = index_[b];
    for (size_t x = 0; x < idx.size(); ++x)
      for (size_t y = 0; y < idx.size(); ++y) {
        Complex z = blocks[b](x, y);
        if (std::abs(z) <= kPattern) continue;
        size_t u = idx[x], v = idx[y];
        auto key = std::make_pair(u / q, v / q);
        auto it = entries.find(key);
        if (it == entries.end()) it = entries.emplace(key, Eigen::MatrixXcd::Zero(q, q)).first;
        it->second(u % q, v % q) = z;
      }
  }
  for (auto& [key, m] : entries) {
    Element e = Element::from_matrix(alg, m);
    if (!e.is_zero()) rows[key.first].push_back({static_cast<int>(key.second), e});
  }
  return ModuleOperator::from_canonical(f, rank, std::move(rows));
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double max_spectral_norm(const std::vector<Eigen::MatrixXcd>& blocks) {
  double r = 0;
  for (const auto& b : blocks) r = std::max(r, spectral_norm(b));
  return r;
}

double operator_norm(const ModuleOperator& op) {
  FlatSpace s = FlatSpace::build({&op});
  return max_spectral_norm(s.flatten(op));
}

double tensor_norm(const TensorElement& t) {
  const FramePtr& f = t.frame();
  const AlgebraPtr& alg = f->algebra();
  switch (alg->backend()) {
    case Backend::fuzzy: {
      const int q = alg->modulus();
      Eigen::MatrixXcd stack = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(t.size()) * q, q);
      bool any = false;
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i].is_zero()) continue;
        stack.block(static_cast<Eigen::Index>(i) * q, 0, q, q) = t[i].to_matrix();
        any = true;
      }
      return any ? spectral_norm(stack) : 0.0;
    }
    case Backend::grid: {
      const auto& sh = alg->grid_shape();
      std::vector<double> acc(sh->points(), 0.0);
      double constant = 0;
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i].is_zero()) continue;
        const GridFunction& g = t[i].grid();
        if (g.is_constant()) {
          constant += std::norm(g.constant_value());
          continue;
        }
        const auto& v = g.samples();
        for (size_t p = 0; p < v.size(); ++p) acc[p] += std::norm(v[p]);
      }
      double m = 0;
      for (double a : acc) m = std::max(m, a + constant);
      return std::sqrt(m);
    }
    case Backend::laurent: {
      double s = 0;
      for (size_t i = 0; i < t.size(); ++i) {
        double l1 = t[i].norm();
        s += l1 * l1;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

}  // namespace lcw

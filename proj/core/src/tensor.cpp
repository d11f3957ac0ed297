#include "lcw/tensor.hpp"

#include "lcw/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace lcw {

namespace {

bool is_unit(const Element& e) {
  if (e.is_neutral()) return false;
  if (!e.is_constant()) return false;
  return e == Element::constant(e.algebra(), e.algebra()->one());
}

void check_same(const FramePtr& a, const FramePtr& b) {
  if (a.get() != b.get()) throw std::invalid_argument("tensors over different frames");
}

// accumulates sparse products into one row
class RowAccumulator {
public:
  explicit RowAccumulator(size_t n) : acc_(n), used_(n, false) {}

  void add(int col, const Element& e) {
    if (e.is_zero()) return;
    if (!used_[col]) {
      used_[col] = true;
      touched_.push_back(col);
      acc_[col] = e;
    } else {
      acc_[col] += e;
    }
  }

  ModuleOperator::Row take() {
    std::sort(touched_.begin(), touched_.end());
    ModuleOperator::Row r;
    for (int c : touched_) {
      if (!acc_[c].is_zero()) r.push_back({c, std::move(acc_[c])});
      acc_[c] = Element();
      used_[c] = false;
    }
    touched_.clear();
    return r;
  }

private:
  std::vector<Element> acc_;
  std::vector<bool> used_;
  std::vector<int> touched_;
};

}  // namespace

// ---- Frame ----

FramePtr Frame::make(AlgebraPtr alg, std::vector<Degree> degrees, ElemMatrix gram, ElemMatrix dagger) {
  const int n = static_cast<int>(degrees.size());
  if (n == 0) throw std::invalid_argument("empty frame");
  if (gram.rows() != n || gram.cols() != n || dagger.rows() != n || dagger.cols() != n)
    throw std::invalid_argument("frame matrices must be N x N");
  auto f = std::shared_ptr<Frame>(new Frame());
  f->alg_ = std::move(alg);
  for (auto& d : degrees) d = f->alg_->reduce(d);
  f->degrees_ = std::move(degrees);
  f->gram_ = std::move(gram);
  f->dagger_ = std::move(dagger);
  f->hpair_ = ElemMatrix(n, n);
  bool ortho = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Element& g = f->gram_(i, j);
      if (i == j ? !is_unit(g) : !g.is_zero()) ortho = false;
    }
  f->orthonormal_ = ortho;
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      Element s(f->alg_);
      for (int l = 0; l < n; ++l) {
        const Element& d = f->dagger_(l, j);
        if (d.is_zero() || f->gram_(l, m).is_zero()) continue;
        s += d.adjoint() * f->gram_(l, m);
      }
      f->hpair_(j, m) = s;
    }
  return f;
}

size_t Frame::dimension(int rank) const {
  size_t d = 1;
  for (int r = 0; r < rank; ++r) d *= static_cast<size_t>(size());
  return d;
}

std::vector<int> Frame::unflatten(size_t flat, int rank) const {
  std::vector<int> idx(rank);
  for (int r = rank; r-- > 0;) {
    idx[r] = static_cast<int>(flat % size());
    flat /= size();
  }
  return idx;
}

Degree Frame::degree_of(size_t flat, int rank) const {
  Degree d;
  for (int r = 0; r < rank; ++r) {
    d = d + degrees_[flat % size()];
    flat /= size();
  }
  return alg_->reduce(d);
}

const ModuleOperator& Frame::identity(int rank) const {
  if (rank < 1 || rank > kMaxRank) throw std::out_of_range("tensor rank");
  std::call_once(id_once_[rank], [&] { build_identity(rank); });
  return *id_[rank];
}

void Frame::build_identity(int rank) const {
  const int n = size();
  FramePtr self = shared_from_this();
  const size_t dim = dimension(rank);
  std::vector<ModuleOperator::Row> rows(dim);
  if (rank == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!gram_(i, j).is_zero()) rows[i].push_back({j, gram_(i, j)});
  } else {
    const ModuleOperator& prev = identity(rank - 1);
    parallel_for(dim, [&](size_t r) {
      size_t ip = r / n;
      int i = static_cast<int>(r % n);
      for (const auto& [jp, gp] : prev.row(ip))
        for (int j = 0; j < n; ++j) {
          const Element& g = gram_(i, j);
          if (g.is_zero()) continue;
          Element e = g * gp.twist(degrees_[j]);
          if (!e.is_zero()) rows[r].push_back({static_cast<int>(jp * n + j), std::move(e)});
        }
      std::sort(rows[r].begin(), rows[r].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    });
  }
  id_[rank] = std::make_unique<ModuleOperator>(ModuleOperator::from_canonical(self, rank, std::move(rows)));
}

const TensorElement& Frame::basis_dagger(size_t flat, int rank) const {
  if (rank < 1 || rank > kMaxRank) throw std::out_of_range("tensor rank");
  std::call_once(dag_once_[rank], [&] { build_daggers(rank); });
  return dag_[rank][flat];
}

void Frame::build_daggers(int rank) const {
  FramePtr self = shared_from_this();
  const int n = size();
  std::vector<TensorElement> out(dimension(rank));
  if (rank == 1) {
    for (int j = 0; j < n; ++j) {
      std::vector<Element> c(n);
      for (int i = 0; i < n; ++i) c[i] = dagger_(i, j);
      out[j] = TensorElement::from_canonical(self, 1, std::move(c));
    }
  } else {
    // (ω_I ⊗ ω_i)† = ω_i† ⊗ ω_I†
    for (size_t r = 0; r < out.size(); ++r)
      out[r] = tensor(basis_dagger(r % n, 1), basis_dagger(r / n, rank - 1));
  }
  dag_[rank] = std::move(out);
}

// ---- TensorElement ----

TensorElement::TensorElement(FramePtr f, int rank) : f_(std::move(f)), rank_(rank), c_(f_->dimension(rank)) {}

TensorElement TensorElement::from_canonical(FramePtr f, int rank, std::vector<Element> c) {
  if (c.size() != f->dimension(rank)) throw std::invalid_argument("coordinate count does not match rank");
  TensorElement t;
  t.f_ = std::move(f);
  t.rank_ = rank;
  t.c_ = std::move(c);
  return t;
}

TensorElement TensorElement::from_coordinates(FramePtr f, int rank, std::vector<Element> raw) {
  TensorElement t = from_canonical(f, rank, std::move(raw));
  if (f->orthonormal()) return t;
  return f->identity(rank).apply(t);
}

TensorElement TensorElement::basis(FramePtr f, const std::vector<int>& idx, const Element& b) {
  const int rank = static_cast<int>(idx.size());
  size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= f->size()) throw std::out_of_range("frame label");
    flat = flat * f->size() + i;
  }
  std::vector<Element> raw(f->dimension(rank));
  raw[flat] = b.is_neutral() ? Element::constant(f->algebra(), f->algebra()->one()) : b;
  return from_coordinates(std::move(f), rank, std::move(raw));
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
  if (!f_) return o;
  if (!o.f_) return *this;
  check_same(f_, o.f_);
  if (rank_ != o.rank_) throw std::invalid_argument("rank mismatch");
  TensorElement t = *this;
  for (size_t i = 0; i < c_.size(); ++i) t.c_[i] += o.c_[i];
  return t;
}

TensorElement TensorElement::operator-() const {
  TensorElement t = *this;
  for (auto& e : t.c_) e = -e;
  return t;
}

TensorElement TensorElement::operator-(const TensorElement& o) const { return *this + (-o); }

TensorElement TensorElement::operator*(const Element& b) const {
  TensorElement t = *this;
  for (auto& e : t.c_) e = e * b;
  return t;
}

TensorElement TensorElement::operator*(const Scalar& s) const {
  TensorElement t = *this;
  for (auto& e : t.c_) e = e * s;
  return t;
}

bool TensorElement::operator==(const TensorElement& o) const { return (*this - o).is_zero(); }

bool TensorElement::is_zero() const {
  for (const auto& e : c_)
    if (!e.is_zero()) return false;
  return true;
}

double TensorElement::max_abs() const {
  double m = 0;
  for (const auto& e : c_) m = std::max(m, e.max_abs());
  return m;
}

TensorElement TensorElement::to_approx(const FramePtr& target) const {
  std::vector<Element> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i].to_approx(target->algebra());
  return from_canonical(target, rank_, std::move(c));
}

// ---- ModuleOperator ----

ModuleOperator::ModuleOperator(FramePtr f, int rank) : f_(std::move(f)), rank_(rank), rows_(f_->dimension(rank)) {}

ModuleOperator ModuleOperator::from_canonical(FramePtr f, int rank, std::vector<Row> rows) {
  if (rows.size() != f->dimension(rank)) throw std::invalid_argument("operator size does not match rank");
  ModuleOperator m;
  m.f_ = std::move(f);
  m.rank_ = rank;
  m.rows_ = std::move(rows);
  return m;
}

ModuleOperator ModuleOperator::from_raw(FramePtr f, int rank, std::vector<Row> rows) {
  for (auto& r : rows) std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ModuleOperator m = from_canonical(f, rank, std::move(rows));
  if (f->orthonormal()) return m;
  return f->identity(rank).compose(m);
}

Element ModuleOperator::entry(size_t i, size_t j) const {
  for (const auto& [c, e] : rows_[i])
    if (static_cast<size_t>(c) == j) return e;
  return Element();
}

size_t ModuleOperator::nonzeros() const {
  size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

TensorElement ModuleOperator::apply(const TensorElement& t) const {
  check_same(f_, t.frame());
  if (t.rank() != rank_) throw std::invalid_argument("operator rank mismatch");
  std::vector<Element> out(rows_.size());
  parallel_for(rows_.size(), [&](size_t i) {
    Element s;
    for (const auto& [j, e] : rows_[i]) {
      const Element& x = t[j];
      if (x.is_zero()) continue;
      s += e * x;
    }
    out[i] = std::move(s);
  });
  return TensorElement::from_canonical(f_, rank_, std::move(out));
}

ModuleOperator ModuleOperator::compose(const ModuleOperator& o) const {
  check_same(f_, o.f_);
  if (o.rank_ != rank_) throw std::invalid_argument("operator rank mismatch");
  const size_t n = rows_.size();
  std::vector<Row> out(n);
  const int workers = std::max(1, std::min<int>(thread_count(), static_cast<int>(n)));
  const size_t chunk = (n + workers - 1) / workers;
  parallel_for(static_cast<size_t>(workers), [&](size_t w) {
    RowAccumulator acc(n);
    for (size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) {
      for (const auto& [k, a] : rows_[i])
        for (const auto& [j, b] : o.rows_[k]) acc.add(j, a * b);
      out[i] = acc.take();
    }
  });
  return from_canonical(f_, rank_, std::move(out));
}

ModuleOperator ModuleOperator::adjoint() const {
  std::vector<Row> out(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, e] : rows_[i]) out[j].push_back({static_cast<int>(i), e.adjoint()});
  return from_canonical(f_, rank_, std::move(out));
}

ModuleOperator ModuleOperator::operator+(const ModuleOperator& o) const {
  check_same(f_, o.f_);
  std::vector<Row> out(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Row& a = rows_[i];
    const Row& b = o.rows_[i];
    size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
      if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
        out[i].push_back(a[p++]);
      } else if (p == a.size() || b[q].first < a[p].first) {
        out[i].push_back(b[q++]);
      } else {
        Element s = a[p].second + b[q].second;
        if (!s.is_zero()) out[i].push_back({a[p].first, std::move(s)});
        ++p;
        ++q;
      }
    }
  }
  return from_canonical(f_, rank_, std::move(out));
}

ModuleOperator ModuleOperator::operator*(const Scalar& s) const {
  ModuleOperator m = *this;
  for (auto& r : m.rows_) {
    Row kept;
    for (auto& [j, e] : r) {
      Element x = e * s;
      if (!x.is_zero()) kept.push_back({j, std::move(x)});
    }
    r = std::move(kept);
  }
  return m;
}

ModuleOperator ModuleOperator::operator-(const ModuleOperator& o) const {
  return *this + o * o.f_->algebra()->from_int(-1);
}

bool ModuleOperator::operator==(const ModuleOperator& o) const { return (*this - o).is_zero(); }

bool ModuleOperator::is_zero() const {
  for (const auto& r : rows_)
    for (const auto& e : r)
      if (!e.second.is_zero()) return false;
  return true;
}

double ModuleOperator::max_abs() const {
  double m = 0;
  for (const auto& r : rows_)
    for (const auto& e : r) m = std::max(m, e.second.max_abs());
  return m;
}

bool ModuleOperator::is_constant() const {
  for (const auto& r : rows_)
    for (const auto& e : r)
      if (!e.second.is_constant()) return false;
  return true;
}

// ---- calculus ----

TensorElement tensor(const TensorElement& s, const TensorElement& t) {
  check_same(s.frame(), t.frame());
  const FramePtr& f = s.frame();
  const int k = s.rank(), l = t.rank();
  const size_t dl = f->dimension(l);
  std::vector<Degree> deg(dl);
  for (size_t j = 0; j < dl; ++j) deg[j] = f->degree_of(j, l);
  std::vector<Element> raw(f->dimension(k + l));
  parallel_for(s.size(), [&](size_t i) {
    const Element& a = s[i];
    if (a.is_zero()) return;
    for (size_t j = 0; j < dl; ++j) {
      if (t[j].is_zero()) continue;
      raw[i * dl + j] = a.twist(deg[j]) * t[j];
    }
  });
  return TensorElement::from_coordinates(f, k + l, std::move(raw));
}

TensorElement left_mul(const Element& b, const TensorElement& t) {
  const FramePtr& f = t.frame();
  std::vector<Element> raw(t.size());
  if (b.is_zero()) return TensorElement::from_canonical(f, t.rank(), std::move(raw));
  parallel_for(t.size(), [&](size_t i) {
    if (t[i].is_zero()) return;
    raw[i] = b.twist(f->degree_of(i, t.rank())) * t[i];
  });
  return TensorElement::from_coordinates(f, t.rank(), std::move(raw));
}

TensorElement tensor_dagger(const TensorElement& t) {
  const FramePtr& f = t.frame();
  const int k = t.rank();
  const size_t n = t.size();
  std::vector<Degree> deg(n);
  for (size_t i = 0; i < n; ++i) deg[i] = f->degree_of(i, k);
  std::vector<Element> star(n);
  for (size_t i = 0; i < n; ++i)
    if (!t[i].is_zero()) star[i] = t[i].adjoint();
  std::vector<Element> raw(n);
  parallel_for(n, [&](size_t l) {
    Element s;
    for (size_t i = 0; i < n; ++i) {
      if (star[i].is_neutral()) continue;
      const Element& d = f->basis_dagger(i, k)[l];
      if (d.is_zero()) continue;
      s += star[i].twist(deg[l]) * d;
    }
    raw[l] = std::move(s);
  });
  return TensorElement::from_coordinates(f, k, std::move(raw));
}

Element inner_product(const TensorElement& s, const TensorElement& t) {
  check_same(s.frame(), t.frame());
  if (s.rank() != t.rank()) throw std::invalid_argument("rank mismatch");
  Element r(s.frame()->algebra());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].is_zero() || t[i].is_zero()) continue;
    r += s[i].adjoint() * t[i];
  }
  return r;
}

TensorElement pair_first(const TensorElement& x, const TensorElement& t) {
  check_same(x.frame(), t.frame());
  const FramePtr& f = x.frame();
  const int n = f->size();
  const int k = t.rank();
  if (x.rank() != 1 || k < 2) throw std::invalid_argument("pair_first needs a one-form and a tensor of rank >= 2");
  const size_t tail = f->dimension(k - 1);
  TensorElement out(f, k - 1);
  for (int a = 0; a < n; ++a) {
    Element xa(f->algebra());
    for (int i = 0; i < n; ++i)
      if (!x[i].is_zero() && !f->gram()(i, a).is_zero()) xa += x[i].adjoint() * f->gram()(i, a);
    if (xa.is_zero()) continue;
    std::vector<Element> eta(tail);
    for (size_t j = 0; j < tail; ++j) eta[j] = t[a * tail + j];
    out += left_mul(xa, TensorElement::from_canonical(f, k - 1, std::move(eta)));
  }
  return out;
}

std::vector<TensorElement> alpha_right(const TensorElement& a) {
  const FramePtr& f = a.frame();
  const int n = f->size();
  const int k = a.rank() - 1;
  if (k < 1) throw std::invalid_argument("alpha needs rank >= 2");
  const size_t head = f->dimension(k);
  const ElemMatrix& h = f->dagger_pairing();
  std::vector<TensorElement> cols(n);
  for (int m = 0; m < n; ++m) {
    std::vector<Element> raw(head);
    parallel_for(head, [&](size_t i) {
      Element s;
      for (int j = 0; j < n; ++j) {
        const Element& c = a[i * n + j];
        if (c.is_zero() || h(j, m).is_zero()) continue;
        s += h(j, m) * c.twist(f->degree(m));
      }
      raw[i] = std::move(s);
    });
    cols[m] = TensorElement::from_coordinates(f, k, std::move(raw));
  }
  return cols;
}

TensorElement alpha_right_apply(const TensorElement& a, const TensorElement& x) {
  auto cols = alpha_right(a);
  TensorElement out(a.frame(), a.rank() - 1);
  for (size_t m = 0; m < cols.size(); ++m)
    if (!x[m].is_zero()) out += cols[m] * x[m];
  return out;
}

TensorElement alpha_right_inv(const std::vector<TensorElement>& columns) {
  if (columns.empty()) throw std::invalid_argument("no columns");
  const FramePtr& f = columns[0].frame();
  TensorElement out(f, columns[0].rank() + 1);
  for (size_t m = 0; m < columns.size(); ++m) out += tensor(columns[m], f->basis_dagger(m, 1));
  return out;
}

std::vector<TensorElement> alpha_left(const TensorElement& a) {
  const FramePtr& f = a.frame();
  const int n = f->size();
  const int k = a.rank() - 1;
  if (k < 1) throw std::invalid_argument("alpha needs rank >= 2");
  const size_t tail = f->dimension(k);
  const ElemMatrix& h = f->dagger_pairing();
  std::vector<TensorElement> ys(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Element> c(tail);
    for (size_t j = 0; j < tail; ++j) c[j] = a[i * tail + j];
    ys[i] = TensorElement::from_canonical(f, k, std::move(c));
  }
  std::vector<TensorElement> cols(n);
  for (int m = 0; m < n; ++m) {
    TensorElement s(f, k);
    for (int i = 0; i < n; ++i)
      if (!h(m, i).is_zero() && !ys[i].is_zero()) s += left_mul(h(m, i), ys[i]);
    cols[m] = s;
  }
  return cols;
}

ModuleOperator sigma_theta(const FramePtr& f) {
  const int n = f->size();
  const AlgebraPtr& alg = f->algebra();
  std::vector<ModuleOperator::Row> rows(f->dimension(2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rows[j * n + i].push_back(
          {i * n + j, Element::constant(alg, alg->theta_phase(f->degree(i), f->degree(j)))});
  return ModuleOperator::from_raw(f, 2, std::move(rows));
}

ModuleOperator psi_from_braiding(const ModuleOperator& sigma) {
  const AlgebraPtr& alg = sigma.frame()->algebra();
  return (sigma.frame()->identity(2) + sigma) * alg->from_rational(Rational(1, 2));
}

ModuleOperator braiding_from_psi(const ModuleOperator& psi) {
  return psi * psi.frame()->algebra()->from_int(2) - psi.frame()->identity(2);
}

ModuleOperator extend_right(const ModuleOperator& op) {
  const FramePtr& f = op.frame();
  const int n = f->size();
  const int k = op.rank();
  std::vector<ModuleOperator::Row> rows(f->dimension(k + 1));
  for (size_t i = 0; i < op.dimension(); ++i)
    for (const auto& [a, e] : op.row(i))
      for (int c = 0; c < n; ++c) {
        Element x = e.twist(f->degree(c));
        if (!x.is_zero()) rows[i * n + c].push_back({static_cast<int>(a * n + c), std::move(x)});
      }
  return ModuleOperator::from_raw(f, k + 1, std::move(rows));
}

ModuleOperator extend_left(const ModuleOperator& op) {
  const FramePtr& f = op.frame();
  const int n = f->size();
  const int k = op.rank();
  const size_t dk = op.dimension();
  std::vector<ModuleOperator::Row> rows(f->dimension(k + 1));
  for (int c = 0; c < n; ++c)
    for (size_t i = 0; i < dk; ++i)
      for (const auto& [a, e] : op.row(i)) rows[c * dk + i].push_back({static_cast<int>(c * dk + a), e});
  return ModuleOperator::from_raw(f, k + 1, std::move(rows));
}

}  // namespace lcw

#pragma once

#include "lcw/grid.hpp"
#include "lcw/levi_civita.hpp"

#include <vector>

// Classical Riemannian formulas evaluated directly from trigonometric metric
// coefficients. Shares no code with the connection engine.
namespace lcw::oracle {

struct TrigPolynomial {
  std::vector<TrigTerm> terms;

  // ∂^{axes} p at x; axes lists one entry per derivative taken
  Complex value(const std::vector<double>& x, const std::vector<int>& axes = {}) const;
};

// symmetric coordinate metric g_{μν} with trigonometric-polynomial entries
class MetricField {
public:
  explicit MetricField(int dim);
  static MetricField diagonal(std::vector<TrigPolynomial> entries);

  int dim() const { return dim_; }
  void set(int mu, int nu, TrigPolynomial p);
  const TrigPolynomial& entry(int mu, int nu) const { return g_[mu * dim_ + nu]; }
  bool is_diagonal() const;

private:
  int dim_;
  std::vector<TrigPolynomial> g_;
};

// values indexed [ν][μ][ρ], with an optional extra derivative index κ last
struct Table3 {
  int dim = 0;
  std::vector<double> v;
  double operator()(int a, int b, int c) const { return v[(a * dim + b) * dim + c]; }
};
struct Table4 {
  int dim = 0;
  std::vector<double> v;
  double operator()(int a, int b, int c, int d) const { return v[((a * dim + b) * dim + c) * dim + d]; }
};

// Γ^ν_{μρ} = ½ g^{νσ}(g_{σμ,ρ} + g_{σρ,μ} - g_{μρ,σ}); throws std::domain_error if g is singular at x
Table3 christoffel(const MetricField& g, const std::vector<double>& x);
// ∂_κ Γ^ν_{μρ} as [ν][μ][ρ][κ]
Table4 christoffel_derivative(const MetricField& g, const std::vector<double>& x);

// coefficients of ∇(dx^ν) on dx^ρ ⊗ dx^μ: -Γ^ν_{μρ}
std::vector<double> connection_on_coordinate_form(const Table3& gamma, int nu);
// coefficients of R(dx^ν) on dx^α ⊗ dx^β ⊗ dx^γ, antisymmetric in the last two slots
std::vector<double> curvature_on_coordinate_form(const Table3& gamma, const Table4& dgamma, int nu);

struct Comparison {
  double max_abs = 0.0;
  size_t points = 0;
  int worst_form = -1;
  size_t worst_point = 0;
};

// engine ∇(dx^ν) against the classical values at every grid point of a commutative geometry
Comparison compare_connection(const Connection& c, const MetricField& g);
Comparison compare_curvature(const Connection& c, const MetricField& g);

}  // namespace lcw::oracle

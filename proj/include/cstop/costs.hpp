#pragma once

#include <variant>

#include "cstop/grid.hpp"
#include "cstop/process.hpp"

namespace cstop {

// Flow cost per unit time, either constant or a function of the belief.
struct CostSpec {
  std::variant<double, PiecewiseLinearSpec> c = 0.0;

  static CostSpec constant(double value) { return CostSpec{value}; }
  static CostSpec piecewise(PiecewiseLinearSpec spec) { return CostSpec{std::move(spec)}; }

  double at(double p, Side side = Side::right) const;
  // Derivative of c inside the segment to the right (side=right) or left of p.
  double slope(double p, Side side) const;
  bool is_constant() const;
  void validate() const;
};

// Index of the grid point nearest 0.5.
std::size_t default_anchor(const BeliefGrid& grid);

// phi'' = 2c/qv integrated twice from the anchor, phi(z) = phi'(z) = 0.
GridFunction phi_transform(const CostSpec& c, const ProcessSpec& process, const GridPtr& grid,
                           double z);
GridFunction phi_transform(const CostSpec& c, const ProcessSpec& process, const GridPtr& grid);

// (c sigma^2 / 2)(2p-1) ln(p/(1-p)); already zero with zero slope at p = 0.5.
GridFunction phi_closed_form_diffusion(double c, double sigma, const GridPtr& grid);
double phi_closed_form_diffusion_at(double c, double sigma, double p);

GridFunction net_payoff(const GridFunction& u, const GridFunction& phi);

}  // namespace cstop

#include "cstop/costs.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cstop {

double CostSpec::at(double p, Side side) const {
  if (auto v = std::get_if<double>(&c)) return *v;
  return eval_pwl(std::get<PiecewiseLinearSpec>(c), p, side);
}

double CostSpec::slope(double p, Side side) const {
  if (std::holds_alternative<double>(c)) return 0.0;
  const auto& s = std::get<PiecewiseLinearSpec>(c);
  const auto& x = s.x;
  if (x.size() < 2) return 0.0;
  std::size_t j;
  if (side == Side::right) {
    auto it = std::upper_bound(x.begin(), x.end(), p);
    if (it == x.begin() || it == x.end()) return 0.0;
    j = static_cast<std::size_t>(it - x.begin()) - 1;
  } else {
    auto it = std::lower_bound(x.begin(), x.end(), p);
    if (it == x.begin() || it == x.end()) return 0.0;
    j = static_cast<std::size_t>(it - x.begin()) - 1;
  }
  return (s.left[j + 1] - s.right[j]) / (x[j + 1] - x[j]);
}

bool CostSpec::is_constant() const {
  if (std::holds_alternative<double>(c)) return true;
  return std::get<PiecewiseLinearSpec>(c).is_constant();
}

void CostSpec::validate() const {
  if (auto v = std::get_if<double>(&c)) {
    if (!(*v >= 0.0) || !std::isfinite(*v)) throw std::invalid_argument("cost must be >= 0");
    return;
  }
  const auto& s = std::get<PiecewiseLinearSpec>(c);
  s.validate();
  for (std::size_t k = 0; k < s.x.size(); ++k)
    if (s.left[k] < 0.0 || s.right[k] < 0.0) throw std::invalid_argument("cost must be >= 0");
}

std::size_t default_anchor(const BeliefGrid& grid) { return grid.nearest(0.5); }

namespace {

// 2c/qv strictly inside a cell, where c and qv are smooth.
double integrand(const CostSpec& c, const ProcessSpec& process, double p) { return 2.0 * c.at(p) / qv_at(process, p); }

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 4, 1e-10);
}

}  // namespace

GridFunction phi_transform(const CostSpec& c, const ProcessSpec& process, const GridPtr& grid,
                           double z) {
  c.validate();
  validate_process(process);
  if (std::holds_alternative<PoissonSpec>(process))
    throw std::invalid_argument("phi_transform needs a diffusion or tabulated process");
  const auto& x = grid->points;
  const std::size_t n = x.size();
  const std::size_t iz = grid->index_of(z);

  // Exact per cell: phi'(b) = phi'(a) + int f, phi(b) = phi(a) + h phi'(a) + int (b - t) f(t) dt.
  auto f = [&](double t) { return integrand(c, process, t); };
  std::vector<double> d(n, 0.0), phi(n, 0.0);
  for (std::size_t k = iz; k + 1 < n; ++k) {
    const double a0 = x[k], b0 = x[k + 1];
    phi[k + 1] = phi[k] + (b0 - a0) * d[k] + integrate([&](double t) { return (b0 - t) * f(t); }, a0, b0);
    d[k + 1] = d[k] + integrate(f, a0, b0);
  }
  for (std::size_t k = iz; k > 0; --k) {
    const double a0 = x[k - 1], b0 = x[k];
    phi[k - 1] = phi[k] - (b0 - a0) * d[k] + integrate([&](double t) { return (t - a0) * f(t); }, a0, b0);
    d[k - 1] = d[k] - integrate(f, a0, b0);
  }
  return {grid, std::move(phi)};
}

GridFunction phi_transform(const CostSpec& c, const ProcessSpec& process, const GridPtr& grid) {
  return phi_transform(c, process, grid, grid->points[default_anchor(*grid)]);
}

double phi_closed_form_diffusion_at(double c, double sigma, double p) {
  return 0.5 * c * sigma * sigma * (2.0 * p - 1.0) * std::log(p / (1.0 - p));
}

GridFunction phi_closed_form_diffusion(double c, double sigma, const GridPtr& grid) {
  if (c < 0.0 || !(sigma > 0.0)) throw std::invalid_argument("closed form needs c >= 0, sigma > 0");
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = phi_closed_form_diffusion_at(c, sigma, grid->points[k]);
  return {grid, std::move(v)};
}

GridFunction net_payoff(const GridFunction& u, const GridFunction& phi) {
  if (!same_grid(u.grid, phi.grid)) throw std::invalid_argument("net_payoff: grid mismatch");
  std::vector<double> v(u.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = u[k] - phi[k];
  return {u.grid, std::move(v)};
}

}  // namespace cstop

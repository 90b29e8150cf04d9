#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cstop/applications.hpp"

namespace cstop {

GridFunction poisson_phi(const CostSpec& c, double lambda, const GridPtr& grid, double z) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  c.validate();
  const auto& x = grid->points;
  const std::size_t k0 = grid->index_of(z);
  auto integrand = [&](double y, Side side) { return c.at(y, side) / (lambda * y * (1.0 - y)); };
  std::vector<double> phi(x.size(), 0.0);
  for (std::size_t k = k0; k + 1 < x.size(); ++k)
    phi[k + 1] = phi[k] + 0.5 * (x[k + 1] - x[k]) * (integrand(x[k], Side::right) + integrand(x[k + 1], Side::left));
  for (std::size_t k = k0; k > 0; --k)
    phi[k - 1] = phi[k] - 0.5 * (x[k] - x[k - 1]) * (integrand(x[k - 1], Side::right) + integrand(x[k], Side::left));
  return {grid, std::move(phi)};
}

double poisson_value(const PiecewiseLinearSpec& u, const GridFunction& phi, std::size_t k, std::size_t prior_index) {
  if (k > prior_index) throw std::invalid_argument("lower stopping belief above the prior");
  const auto& x = phi.grid->points;
  const double p0 = x[prior_index], q = x[k];
  const double w1 = (p0 - q) / (1.0 - q);
  const double stop = eval_pwl(u, q) - (phi[prior_index] - phi[k]);
  return w1 * eval_pwl(u, 1.0) + (1.0 - w1) * stop;
}

PoissonSolution poisson_solve(const PoissonGameSpec& spec) {
  const std::size_t n = spec.players.size();
  if (n == 0 || n > 2) throw std::invalid_argument("Poisson games take one or two players");
  if (spec.rule.n_players != n) throw std::invalid_argument("rule player count mismatch");
  auto classes = classify_players(spec.rule);
  PoissonSolution sol;
  if (classes.uni.size() == n)
    sol.unilateral = true;
  else if (classes.una.size() == n)
    sol.unilateral = false;
  else
    throw std::invalid_argument("Poisson games support unilateral or unanimous stopping only");

  GameSpec gs;
  gs.prior = spec.prior;
  gs.players = spec.players;
  gs.rule = spec.rule;
  gs.grid = spec.grid;
  sol.grid = game_grid(gs);
  sol.prior_index = sol.grid->index_of(spec.prior);
  const std::size_t P = sol.prior_index;

  std::vector<double> tol(n);
  for (std::size_t i = 0; i < n; ++i) {
    spec.players[i].u.validate();
    auto phi = poisson_phi(spec.players[i].c, spec.lambda, sol.grid, spec.prior);
    std::vector<double> J(P + 1);
    for (std::size_t k = 0; k <= P; ++k) J[k] = poisson_value(spec.players[i].u, phi, k, P);
    auto [mn, mx] = std::minmax_element(J.begin(), J.end());
    tol[i] = 1e-9 * std::max(*mx - *mn, 1e-12);
    sol.objective.push_back(std::move(J));
  }

  for (std::size_t k = 0; k <= P; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const auto& J = sol.objective[i];
      // unilateral: a player can only stop sooner; unanimity: only continue longer
      const std::size_t from = sol.unilateral ? k : 0, to = sol.unilateral ? P : k;
      for (std::size_t q = from; q <= to && ok; ++q) ok = J[k] >= J[q] - tol[i];
    }
    if (ok) sol.equilibria.push_back(k);
  }
  if (sol.equilibria.empty()) throw std::runtime_error("no Poisson equilibrium on the grid");
  sol.selected = sol.unilateral ? sol.equilibria.front() : sol.equilibria.back();
  sol.p_low = sol.grid->points[sol.selected];
  return sol;
}

}  // namespace cstop

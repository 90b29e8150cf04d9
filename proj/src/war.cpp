#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cstop/applications.hpp"

namespace cstop {

GameSpec war_game_spec(const WarSpec& spec) {
  if (!(spec.c1 >= 0.0) || !(spec.c2 >= 0.0)) throw std::invalid_argument("war costs must be >= 0");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  GameSpec gs;
  gs.prior = 0.5;
  gs.process = DiffusionSpec{spec.sigma};
  gs.rule = unanimity_rule(2);
  gs.grid.n = spec.n;
  gs.grid.delta = spec.delta;
  const std::vector<double> x{0.0, 0.5, 1.0};
  PlayerSpec p1{{x, {0.0, 0.0, 1.0}, {0.0, 1.0, 1.0}},
                CostSpec::piecewise({x, {spec.c1, spec.c1, 0.0}, {spec.c1, 0.0, 0.0}})};
  PlayerSpec p2{{x, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}},
                CostSpec::piecewise({x, {0.0, 0.0, spec.c2}, {0.0, spec.c2, spec.c2}})};
  gs.players = {p1, p2};
  return gs;
}

WarGame prepare_war(const WarSpec& spec) {
  WarGame war;
  war.spec = spec;
  war.grid = game_grid(war_game_spec(spec));
  war.half = war.grid->index_of(0.5);
  const auto& x = war.grid->points;
  war.phi1.assign(x.size(), 0.0);
  war.phi2.assign(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k <= war.half)
      war.phi1[k] = phi_closed_form_diffusion_at(spec.c1, spec.sigma, x[k]);
    else
      war.phi2[k] = phi_closed_form_diffusion_at(spec.c2, spec.sigma, x[k]);
  }
  return war;
}

std::size_t war_best_response_index(const WarGame& war, int party, std::size_t opponent) {
  const auto& x = war.grid->points;
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  if (party == 1) {
    if (opponent <= war.half || opponent >= x.size()) throw std::invalid_argument("party 1 needs G > 1/2");
    const double G = x[opponent];
    for (std::size_t k = 0; k <= war.half; ++k) {
      double v = ((G - 0.5) * (-war.phi1[k]) + (0.5 - x[k])) / (G - x[k]);
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    return best;
  }
  if (party == 2) {
    if (opponent > war.half) throw std::invalid_argument("party 2 needs g <= 1/2");
    // at g = 1/2 every G ties; use the limit from below
    const double g = x[opponent == war.half && opponent > 0 ? opponent - 1 : opponent];
    for (std::size_t j = war.half + 1; j < x.size(); ++j) {
      double v = ((x[j] - 0.5) + (0.5 - g) * (-war.phi2[j])) / (x[j] - g);
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    }
    return best;
  }
  throw std::invalid_argument("party must be 1 or 2");
}

double war_best_response(const WarGame& war, int party, double opponent_bound) {
  return war.grid->points[war_best_response_index(war, party, war.grid->index_of(opponent_bound))];
}

WarSolution war_solve(const WarGame& war, bool uniqueness_scan, Exec exec) {
  if (!(war.spec.c1 > 0.0) || !(war.spec.c2 > 0.0)) throw std::invalid_argument("war_solve needs c1, c2 > 0");
  const auto& x = war.grid->points;
  WarSolution sol;
  std::size_t G = x.size() - 1, g = 0;
  for (sol.iterations = 1; sol.iterations <= 4 * x.size(); ++sol.iterations) {
    g = war_best_response_index(war, 1, G);
    std::size_t G2 = war_best_response_index(war, 2, g);
    if (G2 == G) {
      sol.converged = true;
      break;
    }
    G = G2;
  }
  sol.g_index = g;
  sol.G_index = G;
  sol.g = x[g];
  sol.G = x[G];
  sol.residual_g = std::abs(x[war_best_response_index(war, 1, G)] - sol.g);
  sol.residual_G = std::abs(x[war_best_response_index(war, 2, g)] - sol.G);

  if (uniqueness_scan) {
    if (x.size() > 260) throw std::invalid_argument("war uniqueness scan is limited to n <= 256");
    const auto lower = static_cast<std::ptrdiff_t>(war.half + 1);
    std::vector<std::size_t> b2(war.half + 1), b1(x.size(), 0);
#pragma omp parallel for if (exec == Exec::parallel)
    for (std::ptrdiff_t k = 0; k < lower; ++k)
      b2[static_cast<std::size_t>(k)] = war_best_response_index(war, 2, static_cast<std::size_t>(k));
#pragma omp parallel for if (exec == Exec::parallel)
    for (std::ptrdiff_t j = lower; j < static_cast<std::ptrdiff_t>(x.size()); ++j)
      b1[static_cast<std::size_t>(j)] = war_best_response_index(war, 1, static_cast<std::size_t>(j));
    for (std::size_t k = 0; k <= war.half; ++k)
      if (b1[b2[k]] == k) ++sol.fixed_points_on_scan;
  }
  return sol;
}

EquilibriumCertificate war_certify(const WarGame& war, const WarSolution& sol) {
  auto game = prepare_game(war_game_spec(war.spec), war.grid);
  return check_equilibrium(game, SamplingRegion::interval(war.grid, sol.g_index, sol.G_index));
}

namespace {

std::vector<SamplingRegion> regions(const std::vector<EquilibriumEntry>& es) {
  std::vector<SamplingRegion> out;
  for (const auto& e : es) out.push_back(e.region);
  return out;
}

}  // namespace

StaticsReport competition_harness(const GameSpec& senders, const PlayerSpec& extra) {
  const std::size_t n = senders.players.size();
  if (n == 0 || n >= 31) throw std::invalid_argument("competition harness needs 1..30 senders");
  const auto una = unanimity_rule(n);
  if (senders.rule.minimal != una.minimal) throw std::invalid_argument("competition harness runs under unanimity");
  GameSpec bigger = senders;
  bigger.players.push_back(extra);
  bigger.rule = unanimity_rule(n + 1);
  auto grid = game_grid(bigger);

  auto small = prepare_game(senders, grid);
  auto big = prepare_game(bigger, grid);
  auto eq_small = regions(enumerate_interval_equilibria(small));
  auto eq_big = regions(enumerate_interval_equilibria(big));
  StaticsReport rep;
  if (eq_small.empty() || eq_big.empty()) {
    rep.lines.push_back("no enumerated equilibrium; nothing to compare");
    return rep;
  }

  auto collusive = efficient_region(small, std::vector<double>(n, 1.0));
  std::size_t larger = 0;
  for (const auto& e : eq_small)
    if (collusive.strictly_contains(e)) ++larger;
  std::ostringstream a;
  a << "collusive region strictly larger than " << larger << " of " << eq_small.size() << " equilibria";
  rep.lines.push_back(a.str());
  rep.violations += larger;

  auto min_small = extremal_equilibria(small, eq_small).minimal;
  auto min_big = extremal_equilibria(big, eq_big).minimal;
  std::size_t shrunk = 0;
  for (const auto& mb : min_big)
    for (const auto& ms : min_small)
      if (ms.strictly_contains(mb)) ++shrunk;
  std::ostringstream b;
  b << "entry: " << min_big.size() << " minimal equilibria vs " << min_small.size()
    << ", strictly smaller pairs: " << shrunk;
  rep.lines.push_back(b.str());
  rep.violations += shrunk;
  return rep;
}

}  // namespace cstop

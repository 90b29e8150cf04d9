#pragma once

#include <string>
#include <vector>

#include "cstop/equilibrium.hpp"

namespace cstop {

// ---- war of information ----

struct WarSpec {
  double c1 = 0.1;
  double c2 = 0.1;
  double sigma = 1.0;
  std::size_t n = 512;
  double delta = 1e-4;
};

struct WarGame {
  WarSpec spec;
  GridPtr grid;
  std::size_t half = 0;      // index of 1/2
  std::vector<double> phi1;  // zero above 1/2
  std::vector<double> phi2;  // zero at and below 1/2
};

WarGame prepare_war(const WarSpec& spec);

// party 1 answers an upper bound G > 1/2 with g <= 1/2; party 2 answers g <= 1/2 with G > 1/2.
std::size_t war_best_response_index(const WarGame& war, int party, std::size_t opponent);
double war_best_response(const WarGame& war, int party, double opponent_bound);

struct WarSolution {
  double g = 0.0;
  double G = 0.0;
  std::size_t g_index = 0;
  std::size_t G_index = 0;
  double residual_g = 0.0;
  double residual_G = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t fixed_points_on_scan = 0;  // 0 when the scan was not run
};

// Alternation from (delta, 1-delta); the 2-D scan needs n <= 256.
WarSolution war_solve(const WarGame& war, bool uniqueness_scan = false, Exec exec = Exec::parallel);

// The same game through the general machinery: one-sided cost masks, unanimity.
GameSpec war_game_spec(const WarSpec& spec);
EquilibriumCertificate war_certify(const WarGame& war, const WarSolution& sol);

// ---- competition in persuasion ----

// senders: unanimity game; extra: one more sender for the entry test.
StaticsReport competition_harness(const GameSpec& senders, const PlayerSpec& extra);

// ---- conclusive Poisson learning ----

struct PoissonGameSpec {
  double lambda = 1.0;
  double prior = 0.5;
  std::vector<PlayerSpec> players;
  CoalitionRule rule;
  GridConfig grid;
};

// Cumulative trapezoid of c(y) / (lambda y (1-y)) from the anchor z.
GridFunction poisson_phi(const CostSpec& c, double lambda, const GridPtr& grid, double z);

struct PoissonSolution {
  GridPtr grid;
  std::size_t prior_index = 0;
  bool unilateral = true;
  std::vector<std::vector<double>> objective;  // per player, indices 0..prior_index
  std::vector<std::size_t> equilibria;         // passing lower bounds, increasing
  std::size_t selected = 0;                    // lowest (unilateral) or highest (unanimity)
  double p_low = 0.0;
  std::string label = "reformulation-consistent";
};

// Objective of a lower stopping belief x[k] <= p0: breakthrough mass at 1 plus
// the no-news mass at x[k] net of the transformed cost.
double poisson_value(const PiecewiseLinearSpec& u, const GridFunction& phi, std::size_t k, std::size_t prior_index);

PoissonSolution poisson_solve(const PoissonGameSpec& spec);

}  // namespace cstop

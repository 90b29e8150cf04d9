#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cstop/equilibrium.hpp"

namespace cstop {

struct CommitteeSpec {
  std::vector<double> v;        // strictly increasing, positive
  std::size_t piv = 1;          // 1-based, in {m, ..., 2m-1}
  std::vector<CostSpec> costs;  // one shared entry or one per player
  ProcessSpec process = DiffusionSpec{1.0};
  CoalitionRule rule;
  GridConfig grid;
};

double committee_threshold(double v);  // w = 1/(1+v)

// u_i(p) = 1 - p below w_piv, p v_i at and above it.
PiecewiseLinearSpec committee_payoff(double v_i, double w_piv);

struct CommitteeGame {
  CommitteeSpec spec;
  Game game;  // prior = w_piv
  double w = 0.0;
  std::size_t w_index = 0;
  std::size_t aux_index = 0;  // grid point just below w_piv

  const GridPtr& grid() const { return game.grid; }
};

CommitteeGame prepare_committee(const CommitteeSpec& spec);

bool homogeneous_costs(const CommitteeSpec& spec);

enum class BoundSide { upper, lower };

// Grid argmax of U_i(p_low, p_high; w_piv) over the free bound, smallest
// belief on ties. Player index is 0-based.
double one_sided_best_response(const CommitteeGame& cg, std::size_t i, BoundSide side, double anchor);
std::size_t best_upper_index(const CommitteeGame& cg, std::size_t i, std::size_t lower);
std::size_t best_lower_index(const CommitteeGame& cg, std::size_t i, std::size_t upper);

// 0-based (L, U).
std::pair<std::size_t, std::size_t> pivotal_players(const CoalitionRule& rule);

enum class Strength { strong, unknown };

struct StrongCertificate {
  std::size_t lo = 0;  // grid indices of (p_low, p_high)
  std::size_t hi = 0;
  double p_low = 0.0;
  double p_high = 0.0;
  double residual_low = 0.0;   // |p_low - B_L(p_high)|
  double residual_high = 0.0;  // |p_high - B_U(p_low)|
  bool residual_ok = false;    // both within one grid cell
  Strength strength = Strength::unknown;
  bool is_maximum = false;
  bool deviation_checked = false;
  bool no_deviation = false;  // coalition scan found nothing
};

struct StrongSolution {
  std::size_t L = 0;
  std::size_t U = 0;
  std::vector<StrongCertificate> fixed_points;  // ordered by p_low
  std::size_t maximum = 0;                      // index into fixed_points
};

// Throws for heterogeneous costs or when no fixed point lies within a cell.
StrongSolution strong_solve(const CommitteeGame& cg, bool run_deviation_scan = true,
                            Exec exec = Exec::parallel);

struct DeviationReport {
  bool pass = true;  // no profitable coalitional deviation found
  Coalition coalition = 0;
  std::size_t target_lo = 0;
  std::size_t target_hi = 0;
  std::size_t scanned = 0;
};

// All players use (x_lo, x_hi); every coalition tries common bounds from a
// 64-point coarse sub-grid, one- or two-sided, plus stopping at once.
DeviationReport strong_check(const CommitteeGame& cg, std::size_t lo, std::size_t hi,
                             Exec exec = Exec::parallel);

struct BridgeResult {
  bool unilateral = true;  // L <= U
  std::vector<SamplingRegion> equilibria;
  SamplingRegion maximum;
  std::vector<SamplingRegion> minimal;
};

// Interval equilibria of the two-player game between L and U at prior w_piv,
// unilateral if L <= U and unanimous otherwise.
BridgeResult pivotal_two_player_equilibria(const CommitteeGame& cg);

}  // namespace cstop

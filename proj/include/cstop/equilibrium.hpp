#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cstop/coalitions.hpp"
#include "cstop/concavify.hpp"
#include "cstop/costs.hpp"
#include "cstop/grid.hpp"
#include "cstop/parallel.hpp"
#include "cstop/process.hpp"
#include "cstop/region.hpp"

namespace cstop {

struct PlayerSpec {
  PiecewiseLinearSpec u;
  CostSpec c;
};

struct GridConfig {
  std::size_t n = 512;
  double delta = 1e-4;
  std::vector<double> pins;  // extra beliefs forced onto the grid
};

struct GameSpec {
  double prior = 0.5;
  std::vector<PlayerSpec> players;
  ProcessSpec process = DiffusionSpec{1.0};
  CoalitionRule rule;
  GridConfig grid;
};

// A game tabulated on its grid.
struct Game {
  GameSpec spec;
  GridPtr grid;
  std::size_t prior_index = 0;
  std::vector<GridFunction> u;
  std::vector<GridFunction> phi;
  std::vector<GridFunction> net;
  std::vector<double> tol;  // per-player certification tolerance

  std::size_t n_players() const { return net.size(); }
  const CoalitionRule& rule() const { return spec.rule; }
};

// Grid: uniform n points plus prior, jumps of every u_i and c_i (with left
// auxiliary points) and the configured pins.
GridPtr game_grid(const GameSpec& spec);
Game prepare_game(const GameSpec& spec);
Game prepare_game(const GameSpec& spec, const GridPtr& grid);
Game with_rule(const Game& game, const CoalitionRule& rule);

// Adds iid uniform noise of the given scale to every u_i grid value.
void jitter_payoffs(Game& game, double scale, std::uint64_t seed);

double certification_tolerance(const GridFunction& f);

// Chord value of net between grid points lo and hi at grid point k.
double u_bar(const GridFunction& net, std::size_t lo, std::size_t hi, std::size_t k);

struct EquilibriumCertificate {
  SamplingRegion region;               // collective sampling region
  std::vector<SamplingRegion> profile; // empty for single-region checks
  std::vector<double> violation;       // max_p V - U per player
  std::vector<double> min_slack;       // min_p V - U per player
  std::vector<std::size_t> worst;      // argmax belief index per player
  std::vector<double> tol;
  std::vector<bool> checked;           // false for players the reduction skips
  bool pass = false;
  bool vacuous = false;       // N_uni and N_una both empty
  bool edge_warning = false;  // a component ends at a grid edge
  bool slack_violation = false;  // U exceeded V by more than 1e-10
};

EquilibriumCertificate check_equilibrium(const Game& game, const std::vector<SamplingRegion>& profile);
EquilibriumCertificate check_equilibrium(const Game& game, const SamplingRegion& region);

enum class EnumScope { single, two_interval };

struct EquilibriumEntry {
  SamplingRegion region;
  EquilibriumCertificate cert;
};

// Certified single-region equilibria among the empty region, open intervals
// containing the prior, and (two_interval) unions (a,m) u (m,b) with a < prior < b.
std::vector<EquilibriumEntry> enumerate_interval_equilibria(const Game& game,
                                                            EnumScope scope = EnumScope::single,
                                                            Exec exec = Exec::parallel);

struct Extremal {
  SamplingRegion maximum;
  EquilibriumCertificate maximum_cert;
  bool maximum_certifies = false;
  std::vector<SamplingRegion> minimal;
};

Extremal extremal_equilibria(const Game& game, const std::vector<SamplingRegion>& equilibria);

// Strict-dominance set of the concave closure of sum_i lambda_i net_i.
SamplingRegion efficient_region(const Game& game, const std::vector<double>& lambda);

struct StaticsReport {
  std::vector<std::string> lines;
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

// u_1 = f + b g, u_2 = f - b g with a shared cost; b values are visited in
// increasing order and each consecutive pair is compared.
StaticsReport misalignment_statics(const GameSpec& base, const PiecewiseLinearSpec& f,
                                   const PiecewiseLinearSpec& g, const std::vector<double>& b_list);

// rules[k] must be a sub-family of rules[k+1] (fewer decisive coalitions first).
StaticsReport rule_statics(const GameSpec& base, const std::vector<CoalitionRule>& rules);

}  // namespace cstop

#pragma once

#include <cstdint>
#include <vector>

#include "cstop/applications.hpp"
#include "cstop/equilibrium.hpp"

namespace cstop {

struct SimConfig {
  std::size_t n_paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 1;
  double max_time = 50.0;
  std::size_t histogram_bins = 50;
};

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

struct SimReport {
  std::vector<MeanSE> payoff;  // terminal u_i(p_tau)
  std::vector<MeanSE> cost;    // accumulated sum c_i(p_t) dt
  MeanSE belief;               // terminal belief
  MeanSE time;
  std::vector<double> terminal;  // per-path terminal beliefs, in path order
  std::vector<std::vector<double>> path_cost;  // per player, per path
  std::vector<std::size_t> histogram;          // terminal beliefs on [0,1]
  double truncated_fraction = 0.0;
  double clamp_fraction = 0.0;  // paths that touched [delta, 1-delta] clamps
  bool clamp_warning = false;   // clamp_fraction >= 1e-3
};

MeanSE mean_se(const std::vector<double>& xs);

// Euler-Maruyama on the belief SDE until the belief leaves the component of
// the region that contains the prior.
SimReport simulate(const Game& game, const SamplingRegion& region, const SimConfig& config,
                   Exec exec = Exec::parallel);
SimReport simulate(const Game& game, const std::vector<SamplingRegion>& profile, const SimConfig& config,
                   Exec exec = Exec::parallel);

struct CostIdentityRow {
  MeanSE simulated;  // E[sum c dt]
  MeanSE predicted;  // E[phi(p_tau)] - phi(p0)
  MeanSE difference; // paired per path
  double allowance = 0.0;
  bool pass = false;
};

struct CostIdentityReport {
  std::vector<CostIdentityRow> players;
  double bias_allowance = 0.0;
  bool pass = false;
};

// Bias allowance: sqrt(dt) * |E[cost]| per player, added to 3 paired SEs.
CostIdentityReport verify_cost_identity(const Game& game, const SamplingRegion& region, const SimConfig& config,
                                        Exec exec = Exec::parallel);

struct PoissonSimReport {
  std::vector<MeanSE> payoff;
  std::vector<MeanSE> cost;
  std::vector<MeanSE> predicted_cost;  // E[phi(p0) - phi(p_before_stop)]
  std::vector<MeanSE> stated_cost;     // integral over the no-news atom only
  double breakthrough_fraction = 0.0;
  MeanSE belief;
};

// Conclusive good-news learning with a lower stopping belief p_low <= p0.
PoissonSimReport simulate_poisson(const PoissonGameSpec& spec, double p_low, const SimConfig& config,
                                  Exec exec = Exec::parallel);

// Least-squares slope of logit(p_t) along an Euler no-news path.
double no_news_logit_slope(double lambda, double p0, double dt, double horizon);

}  // namespace cstop

#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cstop/equilibrium.hpp"

namespace oracle {

// Upper concave envelope by brute force: at every point, the best chord
// between two unmasked points that straddle it.
inline std::vector<double> all_chords(const std::vector<double>& x, const std::vector<double>& y,
                                      const std::vector<bool>& masked, std::size_t lo, std::size_t hi) {
  std::vector<double> out = y;
  for (std::size_t k = lo; k <= hi; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = lo; a <= k; ++a) {
      if (masked[a] && a != lo) continue;
      for (std::size_t b = k; b <= hi; ++b) {
        if (masked[b] && b != hi) continue;
        double v = a == b ? y[a] : ((x[b] - x[k]) * y[a] + (x[k] - x[a]) * y[b]) / (x[b] - x[a]);
        best = std::max(best, v);
      }
    }
    out[k] = best;
  }
  return out;
}

inline std::vector<bool> point_mask(const cstop::SamplingRegion& r) {
  std::vector<bool> m(r.grid()->size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = r.contains_index(k);
  return m;
}

// Check written from the definitions: each player compares the
// best chord over admissible stopping points with the realized chord.
inline double brute_violation(const cstop::GridFunction& net, const cstop::SamplingRegion& C,
                              const cstop::SamplingRegion& S, const cstop::SamplingRegion& O) {
  const auto& x = net.grid->points;
  const std::size_t n = x.size();
  auto maskS = point_mask(S);
  std::vector<double> V = net.values;
  for (auto [a, b] : C.components()) {
    auto hull = all_chords(x, net.values, maskS, a, b);
    for (std::size_t k = a; k <= b; ++k) V[k] = hull[k];
  }
  std::vector<double> U = net.values;
  for (auto [a, b] : O.components())
    for (std::size_t k = a + 1; k < b; ++k) U[k] = ((x[b] - x[k]) * net[a] + (x[k] - x[a]) * net[b]) / (x[b] - x[a]);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, V[k] - U[k]);
  return worst;
}

// Random continuous piecewise-linear function on [0,1] with m interior kinks.
inline cstop::PiecewiseLinearSpec random_pwl(std::mt19937_64& rng, int kinks, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> ux(0.05, 0.95), uy(lo, hi);
  std::vector<double> xs{0.0, 1.0};
  for (int k = 0; k < kinks; ++k) xs.push_back(ux(rng));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> ys;
  for (std::size_t k = 0; k < xs.size(); ++k) ys.push_back(uy(rng));
  return cstop::PiecewiseLinearSpec::continuous(xs, ys);
}

// Payoff fixture with a two-interval unanimity equilibrium around 0.5.
inline cstop::PiecewiseLinearSpec two_interval_fixture() {
  return cstop::PiecewiseLinearSpec::continuous({0.0, 0.25, 0.35, 0.5, 0.65, 0.75, 1.0},
                                                {0.2, 0.6, 0.1, 0.45, 0.1, 0.6, 0.2});
}

}  // namespace oracle

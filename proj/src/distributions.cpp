#include "cstop/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cstop {

PosteriorDistribution PosteriorDistribution::make(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  PosteriorDistribution d;
  double total = 0.0;
  for (auto [p, w] : atoms) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("atom belief outside [0,1]");
    if (!(w >= 0.0)) throw std::invalid_argument("negative atom probability");
    total += w;
    if (w == 0.0) continue;
    if (!d.atoms.empty() && d.atoms.back().first == p)
      d.atoms.back().second += w;
    else
      d.atoms.emplace_back(p, w);
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atom probabilities must sum to 1");
  return d;
}

double PosteriorDistribution::mean() const {
  double m = 0.0;
  for (auto [p, w] : atoms) m += p * w;
  return m;
}

double PosteriorDistribution::integrated_cdf(double x) const {
  double s = 0.0;
  for (auto [p, w] : atoms) {
    if (p >= x) break;
    s += w * (x - p);
  }
  return s;
}

PosteriorDistribution BinaryPolicy::distribution() const {
  if (degenerate()) return PosteriorDistribution::make({{prior, 1.0}});
  return PosteriorDistribution::make({{lower, w_low}, {upper, w_high}});
}

BinaryPolicy binary_from_bounds(double p_low, double p_high, double prior) {
  if (!(p_low <= prior && prior <= p_high))
    throw std::invalid_argument("binary policy needs p_low <= prior <= p_high");
  BinaryPolicy b;
  b.lower = p_low;
  b.upper = p_high;
  b.prior = prior;
  if (p_low < p_high) {
    b.w_low = (p_high - prior) / (p_high - p_low);
    b.w_high = 1.0 - b.w_low;
  } else {
    b.lower = b.upper = prior;
  }
  return b;
}

bool is_mpc(const PosteriorDistribution& F, const PosteriorDistribution& G, double tol) {
  if (std::abs(F.mean() - G.mean()) > tol) return false;
  std::vector<double> xs;
  for (auto [p, w] : F.atoms) xs.push_back(p);
  for (auto [p, w] : G.atoms) xs.push_back(p);
  // integrated CDFs are piecewise linear with kinks only at atoms
  for (double x : xs)
    if (F.integrated_cdf(x) > G.integrated_cdf(x) + tol) return false;
  return true;
}

bool is_mps_supported(const PosteriorDistribution& F, const PosteriorDistribution& G,
                      const SamplingRegion& region, double tol) {
  if (!is_mpc(G, F, tol)) return false;
  return std::none_of(F.atoms.begin(), F.atoms.end(),
                      [&region](const auto& a) { return region.contains(a.first); });
}

}  // namespace cstop

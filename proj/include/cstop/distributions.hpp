#pragma once

#include <utility>
#include <vector>

#include "cstop/region.hpp"

namespace cstop {

struct PosteriorDistribution {
  std::vector<std::pair<double, double>> atoms;  // (belief, probability), sorted by belief

  // Sorts, merges equal beliefs, drops zero mass; rejects bad probabilities.
  static PosteriorDistribution make(std::vector<std::pair<double, double>> atoms);
  double mean() const;
  // Integral of the CDF from 0 to x.
  double integrated_cdf(double x) const;
};

struct BinaryPolicy {
  double lower = 0.0;
  double upper = 0.0;
  double prior = 0.0;
  double w_low = 1.0;
  double w_high = 0.0;

  bool degenerate() const { return lower == upper; }
  double mean() const { return w_low * lower + w_high * upper; }
  PosteriorDistribution distribution() const;
};

BinaryPolicy binary_from_bounds(double p_low, double p_high, double prior);

// F is a mean-preserving contraction of G.
bool is_mpc(const PosteriorDistribution& F, const PosteriorDistribution& G, double tol = 1e-10);

// F is a mean-preserving spread of G with no atom inside the region.
bool is_mps_supported(const PosteriorDistribution& F, const PosteriorDistribution& G,
                      const SamplingRegion& region, double tol = 1e-10);

}  // namespace cstop

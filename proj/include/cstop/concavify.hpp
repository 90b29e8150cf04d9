#pragma once

#include <utility>
#include <vector>

#include "cstop/coalitions.hpp"
#include "cstop/grid.hpp"
#include "cstop/region.hpp"

namespace cstop {

struct Bounds {
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool edge = false;  // a bound is a grid edge standing in for 0 or 1
};

// Nearest stopping points below and above grid point k; (k, k) outside the region.
Bounds component_bounds(std::size_t k, const SamplingRegion& region);

struct ClosureResult {
  GridFunction closure;  // equals the input outside [lo, hi]
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::vector<std::size_t> vertices;                      // hull vertices, increasing
  std::vector<std::pair<std::size_t, std::size_t>> support;  // per point in [lo, hi]
};

// Upper concave envelope of the points of [lo, hi] not in mask.
ClosureResult concave_closure(const GridFunction& values, std::size_t lo, std::size_t hi,
                              const SamplingRegion* mask = nullptr);

// Low-level kernel: closure of (x, y) over [lo, hi] skipping points whose
// mask slot is set; writes out[lo..hi]. Scope endpoints must be unmasked.
void closure_kernel(const double* x, const double* y, std::size_t lo, std::size_t hi,
                    const std::uint8_t* mask_slots, double* out, std::vector<std::size_t>& stack);

// V over the whole grid: net outside C, closure of net masked on S within each
// component of C.
GridFunction closure_general(const GridFunction& net, const SamplingRegion& C, const SamplingRegion& S);
GridFunction closure_in(const GridFunction& net, const SamplingRegion& region);
GridFunction closure_out(const GridFunction& net, const SamplingRegion& region);

// V_i^G at grid point k given the other players' regions (profile[i] ignored).
double constrained_closure(std::size_t i, const GridFunction& net, const CoalitionRule& rule,
                           const std::vector<SamplingRegion>& profile, std::size_t k);

}  // namespace cstop

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cstop/grid.hpp"

namespace cstop {

// Open subset of (delta, 1-delta) whose boundary lies on grid points.
//
// Stored as 2n-1 slots: slot 2k is grid point k, slot 2k+1 is the open cell
// (x_k, x_{k+1}). A point slot is set only when both neighbouring cells are,
// so unions and intersections are elementwise and stay open.
class SamplingRegion {
 public:
  SamplingRegion() = default;
  static SamplingRegion empty(const GridPtr& grid);
  // (x_0, x_{n-1}): the whole clipped interior.
  static SamplingRegion full(const GridPtr& grid);
  // Open interval (x_lo, x_hi); empty when hi <= lo.
  static SamplingRegion interval(const GridPtr& grid, std::size_t lo, std::size_t hi);
  // Union of (lo, hi) pairs whose endpoints are grid points.
  static SamplingRegion from_intervals(const GridPtr& grid,
                                       const std::vector<std::pair<double, double>>& intervals);
  // Maximal runs of flagged points k..j become (x_{k-1}, x_{j+1}).
  static SamplingRegion from_point_runs(const GridPtr& grid, const std::vector<bool>& flags);

  const GridPtr& grid() const { return grid_; }
  bool is_empty() const;
  bool contains_index(std::size_t k) const { return slots_[2 * k] != 0; }
  bool contains_cell(std::size_t k) const { return slots_[2 * k + 1] != 0; }
  // Membership for an arbitrary belief.
  bool contains(double p) const;

  // Maximal components as grid index pairs (lo, hi), meaning (x_lo, x_hi).
  std::vector<std::pair<std::size_t, std::size_t>> components() const;
  std::vector<std::pair<double, double>> intervals() const;

  SamplingRegion unite(const SamplingRegion& other) const;
  SamplingRegion intersect(const SamplingRegion& other) const;
  bool subset_of(const SamplingRegion& other) const;
  bool strictly_contains(const SamplingRegion& other) const;
  bool operator==(const SamplingRegion& other) const;
  bool operator!=(const SamplingRegion& other) const { return !(*this == other); }
  // True if some component reaches the first or last grid point.
  bool touches_edge() const;

  const std::vector<std::uint8_t>& slots() const { return slots_; }

 private:
  SamplingRegion(GridPtr grid, std::vector<std::uint8_t> slots)
      : grid_(std::move(grid)), slots_(std::move(slots)) {}
  void check_same(const SamplingRegion& other) const;

  GridPtr grid_;
  std::vector<std::uint8_t> slots_;
};

}  // namespace cstop

#include "cstop/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace cstop {

SamplingRegion SamplingRegion::empty(const GridPtr& grid) {
  return {grid, std::vector<std::uint8_t>(2 * grid->size() - 1, 0)};
}

SamplingRegion SamplingRegion::full(const GridPtr& grid) {
  return interval(grid, 0, grid->size() - 1);
}

SamplingRegion SamplingRegion::interval(const GridPtr& grid, std::size_t lo, std::size_t hi) {
  auto r = empty(grid);
  if (hi >= grid->size()) throw std::out_of_range("interval endpoint beyond grid");
  if (hi <= lo) return r;
  std::fill(r.slots_.begin() + static_cast<std::ptrdiff_t>(2 * lo + 1),
            r.slots_.begin() + static_cast<std::ptrdiff_t>(2 * hi), 1);
  return r;
}

SamplingRegion SamplingRegion::from_intervals(
    const GridPtr& grid, const std::vector<std::pair<double, double>>& intervals) {
  auto r = empty(grid);
  for (const auto& [a, b] : intervals) {
    if (!(a < b)) throw std::invalid_argument("region interval must satisfy lo < hi");
    r = r.unite(interval(grid, grid->index_of(a), grid->index_of(b)));
  }
  return r;
}

SamplingRegion SamplingRegion::from_point_runs(const GridPtr& grid, const std::vector<bool>& flags) {
  if (flags.size() != grid->size()) throw std::invalid_argument("flag vector length mismatch");
  auto r = empty(grid);
  const std::size_t n = flags.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!flags[k]) continue;
    r.slots_[2 * k - 1] = r.slots_[2 * k] = r.slots_[2 * k + 1] = 1;
  }
  return r;
}

bool SamplingRegion::is_empty() const {
  return std::none_of(slots_.begin(), slots_.end(), [](std::uint8_t s) { return s != 0; });
}

bool SamplingRegion::contains(double p) const {
  const auto& x = grid_->points;
  if (p <= x.front() || p >= x.back()) return false;
  std::size_t k = grid_->cell_of(p);
  if (p == x[k]) return contains_index(k);
  return contains_cell(k);
}

std::vector<std::pair<std::size_t, std::size_t>> SamplingRegion::components() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t m = slots_.size();
  std::size_t s = 0;
  while (s < m) {
    if (!slots_[s]) {
      ++s;
      continue;
    }
    std::size_t e = s;
    while (e + 1 < m && slots_[e + 1]) ++e;
    // runs start and end on cell slots
    out.emplace_back((s - 1) / 2, (e + 1) / 2);
    s = e + 1;
  }
  return out;
}

std::vector<std::pair<double, double>> SamplingRegion::intervals() const {
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : components()) out.emplace_back(grid_->points[a], grid_->points[b]);
  return out;
}

void SamplingRegion::check_same(const SamplingRegion& other) const {
  if (!same_grid(grid_, other.grid_)) throw std::invalid_argument("regions on different grids");
}

SamplingRegion SamplingRegion::unite(const SamplingRegion& other) const {
  check_same(other);
  auto s = slots_;
  for (std::size_t k = 0; k < s.size(); ++k) s[k] |= other.slots_[k];
  return {grid_, std::move(s)};
}

SamplingRegion SamplingRegion::intersect(const SamplingRegion& other) const {
  check_same(other);
  auto s = slots_;
  for (std::size_t k = 0; k < s.size(); ++k) s[k] &= other.slots_[k];
  return {grid_, std::move(s)};
}

bool SamplingRegion::subset_of(const SamplingRegion& other) const {
  check_same(other);
  for (std::size_t k = 0; k < slots_.size(); ++k)
    if (slots_[k] && !other.slots_[k]) return false;
  return true;
}

bool SamplingRegion::strictly_contains(const SamplingRegion& other) const {
  return other.subset_of(*this) && other != *this;
}

bool SamplingRegion::operator==(const SamplingRegion& other) const {
  return same_grid(grid_, other.grid_) && slots_ == other.slots_;
}

bool SamplingRegion::touches_edge() const {
  return !slots_.empty() && (slots_[1] != 0 || slots_[slots_.size() - 2] != 0);
}

}  // namespace cstop

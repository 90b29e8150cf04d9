#include "cstop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cstop {

namespace {
constexpr double kDedupTol = 1e-12;
}

std::size_t BeliefGrid::index_of(double p) const {
  auto k = nearest(p);
  if (std::abs(points[k] - p) > kDedupTol)
    throw std::invalid_argument("belief " + std::to_string(p) + " is not a grid point");
  return k;
}

std::size_t BeliefGrid::nearest(double p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.begin()) return 0;
  if (it == points.end()) return points.size() - 1;
  auto k = static_cast<std::size_t>(it - points.begin());
  return (p - points[k - 1] <= points[k] - p) ? k - 1 : k;
}

std::size_t BeliefGrid::cell_of(double p) const {
  auto it = std::upper_bound(points.begin(), points.end(), p);
  std::size_t k = it == points.begin() ? 0 : static_cast<std::size_t>(it - points.begin()) - 1;
  return std::min(k, points.size() - 2);
}

bool BeliefGrid::contains_point(double p) const {
  return std::abs(points[nearest(p)] - p) <= kDedupTol;
}

std::vector<double> merge_uniform(std::size_t n, double lo, double hi,
                                  const std::vector<double>& pinned) {
  if (n < 2) throw std::invalid_argument("need at least two grid points");
  std::vector<double> pts(n);
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  pts.back() = hi;
  pts.insert(pts.end(), pinned.begin(), pinned.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (!out.empty() && p - out.back() <= kDedupTol) {
      // keep the pinned value exactly
      if (std::find(pinned.begin(), pinned.end(), p) != pinned.end()) out.back() = p;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

GridPtr build_grid(std::size_t n, double delta, std::vector<double> pinned) {
  if (n < 16) throw std::invalid_argument("grid needs n >= 16");
  if (!(delta > 0.0) || delta > 1e-2) throw std::invalid_argument("delta must lie in (0, 1e-2]");
  for (double p : pinned)
    if (!(p > delta && p < 1.0 - delta))
      throw std::invalid_argument("pinned belief " + std::to_string(p) + " outside (delta, 1-delta)");
  auto g = std::make_shared<BeliefGrid>();
  g->delta = delta;
  g->h = (1.0 - 2.0 * delta) / static_cast<double>(n - 1);
  std::sort(pinned.begin(), pinned.end());
  g->pinned = pinned;
  g->points = merge_uniform(n, delta, 1.0 - delta, pinned);
  g->points.front() = delta;
  g->points.back() = 1.0 - delta;
  return g;
}

PiecewiseLinearSpec PiecewiseLinearSpec::constant(double c) { return {{0.0, 1.0}, {c, c}, {c, c}}; }

PiecewiseLinearSpec PiecewiseLinearSpec::linear(double at0, double at1) {
  return {{0.0, 1.0}, {at0, at1}, {at0, at1}};
}

PiecewiseLinearSpec PiecewiseLinearSpec::continuous(std::vector<double> x, std::vector<double> y) {
  PiecewiseLinearSpec s{std::move(x), y, y};
  s.validate();
  return s;
}

PiecewiseLinearSpec PiecewiseLinearSpec::affine_jump(double b, double a_lo, double s_lo,
                                                     double a_hi, double s_hi) {
  PiecewiseLinearSpec s;
  s.x = {0.0, b, 1.0};
  s.left = {a_lo, a_lo + s_lo * b, a_hi + s_hi};
  s.right = {a_lo, a_hi + s_hi * b, a_hi + s_hi};
  s.validate();
  return s;
}

void PiecewiseLinearSpec::validate() const {
  if (x.empty() || x.size() != left.size() || x.size() != right.size())
    throw std::invalid_argument("piecewise-linear spec: mismatched or empty arrays");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0 && x[k] <= 1.0))
      throw std::invalid_argument("piecewise-linear spec: breakpoint outside [0,1]");
    if (k > 0 && !(x[k] > x[k - 1]))
      throw std::invalid_argument("piecewise-linear spec: breakpoints must increase");
    if (!std::isfinite(left[k]) || !std::isfinite(right[k]))
      throw std::invalid_argument("piecewise-linear spec: non-finite value");
  }
}

std::vector<double> PiecewiseLinearSpec::jumps(double tol) const {
  std::vector<double> out;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] > 0.0 && x[k] < 1.0 && std::abs(left[k] - right[k]) > tol) out.push_back(x[k]);
  return out;
}

bool PiecewiseLinearSpec::is_constant() const {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (left[k] != left[0] || right[k] != left[0]) return false;
  return true;
}

double eval_pwl(const PiecewiseLinearSpec& s, double p, Side side) {
  const auto& x = s.x;
  if (p <= x.front()) return (p == x.front() && side == Side::left) ? s.left[0] : s.right[0];
  if (p >= x.back()) return (p == x.back() && side == Side::left) ? s.left.back() : s.right.back();
  auto it = std::upper_bound(x.begin(), x.end(), p);
  auto k = static_cast<std::size_t>(it - x.begin());  // x[k-1] <= p < x[k]
  if (p == x[k - 1]) return side == Side::left ? s.left[k - 1] : s.right[k - 1];
  double t = (p - x[k - 1]) / (x[k] - x[k - 1]);
  return s.right[k - 1] + t * (s.left[k] - s.right[k - 1]);
}

PiecewiseLinearSpec combine(double a, const PiecewiseLinearSpec& f, double b,
                            const PiecewiseLinearSpec& g) {
  std::vector<double> x = f.x;
  x.insert(x.end(), g.x.begin(), g.x.end());
  x.push_back(0.0);
  x.push_back(1.0);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  PiecewiseLinearSpec s;
  s.x = x;
  for (double p : x) {
    s.left.push_back(a * eval_pwl(f, p, Side::left) + b * eval_pwl(g, p, Side::left));
    s.right.push_back(a * eval_pwl(f, p, Side::right) + b * eval_pwl(g, p, Side::right));
  }
  return s;
}

double aux_offset(double h) { return 1e-3 * h; }

std::vector<double> discontinuity_pins(const PiecewiseLinearSpec& spec, double h) {
  std::vector<double> out;
  for (double b : spec.jumps()) {
    out.push_back(b);
    out.push_back(b - aux_offset(h));
  }
  return out;
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw std::invalid_argument("grid function length mismatch");
}

GridFunction::GridFunction(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

double GridFunction::interpolate(double p) const {
  const auto& x = grid->points;
  if (p <= x.front()) return values.front();
  if (p >= x.back()) return values.back();
  auto k = grid->cell_of(p);
  double t = (p - x[k]) / (x[k + 1] - x[k]);
  return values[k] + t * (values[k + 1] - values[k]);
}

GridFunction sample(const PiecewiseLinearSpec& spec, const GridPtr& grid) {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = eval_pwl(spec, grid->points[k], Side::right);
  return {grid, std::move(v)};
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && a->points == b->points);
}

}  // namespace cstop

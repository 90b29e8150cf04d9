#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace cstop {

struct BeliefGrid {
  std::vector<double> points;
  double delta = 0.0;
  double h = 0.0;
  std::vector<double> pinned;

  std::size_t size() const { return points.size(); }
  double operator[](std::size_t k) const { return points[k]; }

  // Index of a point that is on the grid (within 1e-12); throws otherwise.
  std::size_t index_of(double p) const;
  std::size_t nearest(double p) const;
  // Largest k with points[k] <= p, clamped to [0, size()-2].
  std::size_t cell_of(double p) const;
  bool contains_point(double p) const;
};

using GridPtr = std::shared_ptr<const BeliefGrid>;

// Uniform points on [lo, hi] merged with pinned beliefs, deduplicated within 1e-12.
std::vector<double> merge_uniform(std::size_t n, double lo, double hi,
                                  const std::vector<double>& pinned);

GridPtr build_grid(std::size_t n, double delta, std::vector<double> pinned = {});

enum class Side { left, right };

// Breakpoints x_k with one-sided values; evaluation interpolates right-value
// of x_k with left-value of x_{k+1}. Constant extrapolation outside [x_0, x_m].
struct PiecewiseLinearSpec {
  std::vector<double> x;
  std::vector<double> left;
  std::vector<double> right;

  static PiecewiseLinearSpec constant(double c);
  static PiecewiseLinearSpec linear(double at0, double at1);
  static PiecewiseLinearSpec continuous(std::vector<double> x, std::vector<double> y);
  // u(p) = lo_fn(p) below b and hi_fn(p) at/after b, each affine (a + s p).
  static PiecewiseLinearSpec affine_jump(double b, double a_lo, double s_lo, double a_hi,
                                         double s_hi);

  void validate() const;
  // Interior breakpoints whose left and right values differ.
  std::vector<double> jumps(double tol = 0.0) const;
  bool is_constant() const;
};

double eval_pwl(const PiecewiseLinearSpec& spec, double p, Side side = Side::right);

// a*f + b*g on the union of breakpoints.
PiecewiseLinearSpec combine(double a, const PiecewiseLinearSpec& f, double b, const PiecewiseLinearSpec& g);

// Offset of the auxiliary point placed below each discontinuity.
double aux_offset(double h);

// Breakpoints with jumps plus their left-auxiliary points, for pinning.
std::vector<double> discontinuity_pins(const PiecewiseLinearSpec& spec, double h);

struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v);
  GridFunction(GridPtr g, double fill);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  // Linear interpolation between grid points, constant outside.
  double interpolate(double p) const;
};

GridFunction sample(const PiecewiseLinearSpec& spec, const GridPtr& grid);

bool same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace cstop

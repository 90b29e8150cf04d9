#include "cstop/concavify.hpp"

#include <stdexcept>

namespace cstop {

Bounds component_bounds(std::size_t k, const SamplingRegion& region) {
  Bounds b{k, k, false};
  if (!region.contains_index(k)) return b;
  const std::size_t n = region.grid()->size();
  while (b.lo > 0 && region.contains_index(b.lo)) --b.lo;
  while (b.hi + 1 < n && region.contains_index(b.hi)) ++b.hi;
  b.edge = b.lo == 0 || b.hi == n - 1;
  return b;
}

namespace {

// Positive when (ax, ay) lies strictly below the segment o -> b.
inline double turn(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

}  // namespace

void closure_kernel(const double* x, const double* y, std::size_t lo, std::size_t hi,
                    const std::uint8_t* mask_slots, double* out, std::vector<std::size_t>& stack) {
  stack.clear();
  for (std::size_t k = lo; k <= hi; ++k) {
    if (mask_slots && mask_slots[2 * k] && k != lo && k != hi) continue;
    // collinear points stay on the hull
    while (stack.size() >= 2) {
      std::size_t a = stack[stack.size() - 1], o = stack[stack.size() - 2];
      if (turn(x[o], y[o], x[a], y[a], x[k], y[k]) > 0.0)
        stack.pop_back();
      else
        break;
    }
    stack.push_back(k);
  }
  for (std::size_t v = 0; v + 1 < stack.size(); ++v) {
    std::size_t a = stack[v], b = stack[v + 1];
    out[a] = y[a];
    const double dx = x[b] - x[a];
    for (std::size_t k = a + 1; k < b; ++k)
      out[k] = ((x[b] - x[k]) * y[a] + (x[k] - x[a]) * y[b]) / dx;
  }
  out[stack.back()] = y[stack.back()];
}

ClosureResult concave_closure(const GridFunction& values, std::size_t lo, std::size_t hi,
                              const SamplingRegion* mask) {
  const std::size_t n = values.size();
  if (lo > hi || hi >= n) throw std::out_of_range("closure scope outside grid");
  if (mask) {
    if (!same_grid(mask->grid(), values.grid)) throw std::invalid_argument("closure mask grid mismatch");
    if (mask->contains_index(lo) || mask->contains_index(hi))
      throw std::invalid_argument("closure scope endpoint is masked");
  }
  ClosureResult r;
  r.closure = values;
  r.lo = lo;
  r.hi = hi;
  std::vector<std::size_t> stack;
  closure_kernel(values.grid->points.data(), values.values.data(), lo, hi,
                 mask ? mask->slots().data() : nullptr, r.closure.values.data(), stack);
  r.vertices = stack;
  r.support.reserve(hi - lo + 1);
  std::size_t v = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    while (v + 1 < stack.size() && stack[v + 1] <= k) ++v;
    if (stack[v] == k || v + 1 == stack.size())
      r.support.emplace_back(k, k);
    else
      r.support.emplace_back(stack[v], stack[v + 1]);
  }
  return r;
}

GridFunction closure_general(const GridFunction& net, const SamplingRegion& C, const SamplingRegion& S) {
  if (!same_grid(net.grid, C.grid()) || !same_grid(net.grid, S.grid()))
    throw std::invalid_argument("closure grid mismatch");
  GridFunction V = net;
  std::vector<std::size_t> stack;
  const auto* x = net.grid->points.data();
  for (auto [a, b] : C.components())
    closure_kernel(x, net.values.data(), a, b, S.slots().data(), V.values.data(), stack);
  return V;
}

GridFunction closure_in(const GridFunction& net, const SamplingRegion& region) {
  return closure_general(net, region, SamplingRegion::empty(net.grid));
}

GridFunction closure_out(const GridFunction& net, const SamplingRegion& region) {
  return closure_general(net, SamplingRegion::full(net.grid), region);
}

double constrained_closure(std::size_t i, const GridFunction& net, const CoalitionRule& rule,
                           const std::vector<SamplingRegion>& profile, std::size_t k) {
  auto env = player_envelopes(rule, i, profile);
  if (!env.C.contains_index(k)) return net[k];
  auto b = component_bounds(k, env.C);
  std::vector<double> out(net.size());
  std::vector<std::size_t> stack;
  closure_kernel(net.grid->points.data(), net.values.data(), b.lo, b.hi, env.S.slots().data(),
                 out.data(), stack);
  return out[k];
}

}  // namespace cstop

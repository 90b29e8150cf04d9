#include "cstop/process.hpp"

#include <cmath>
#include <stdexcept>

namespace cstop {

void validate_process(const ProcessSpec& spec) {
  if (auto d = std::get_if<DiffusionSpec>(&spec)) {
    if (!(d->sigma > 0.0)) throw std::invalid_argument("diffusion sigma must be positive");
  } else if (auto q = std::get_if<PoissonSpec>(&spec)) {
    if (!(q->lambda > 0.0)) throw std::invalid_argument("poisson lambda must be positive");
  } else {
    const auto& c = std::get<CustomQvSpec>(spec);
    if (!c.qv.grid) throw std::invalid_argument("custom qv table has no grid");
    for (double v : c.qv.values)
      if (!(v > 0.0)) throw std::invalid_argument("custom qv table must be strictly positive");
  }
}

double qv_at(const ProcessSpec& spec, double p) {
  if (auto d = std::get_if<DiffusionSpec>(&spec)) {
    double s = p * (1.0 - p);
    return 4.0 / (d->sigma * d->sigma) * s * s;
  }
  if (std::holds_alternative<PoissonSpec>(spec))
    throw std::logic_error("qv_at is undefined for the Poisson process");
  const auto& c = std::get<CustomQvSpec>(spec);
  const auto& x = c.qv.grid->points;
  if (p < x.front() - 1e-12 || p > x.back() + 1e-12)
    throw std::out_of_range("belief outside the custom qv table");
  double v = c.qv.interpolate(p);
  if (!(v > 0.0)) throw std::domain_error("custom qv is not positive");
  return v;
}

double diffusion_coefficient(const ProcessSpec& spec, double p) { return std::sqrt(qv_at(spec, p)); }

}  // namespace cstop

#pragma once

#include <variant>

#include "cstop/grid.hpp"

namespace cstop {

struct DiffusionSpec {
  double sigma = 1.0;
};

struct PoissonSpec {
  double lambda = 1.0;
};

struct CustomQvSpec {
  GridFunction qv;
};

using ProcessSpec = std::variant<DiffusionSpec, PoissonSpec, CustomQvSpec>;

void validate_process(const ProcessSpec& spec);

// Quadratic-variation rate of the belief at p. Undefined for PoissonSpec (throws).
double qv_at(const ProcessSpec& spec, double p);

// Diffusion coefficient of dp = s(p) dB, i.e. sqrt(qv).
double diffusion_coefficient(const ProcessSpec& spec, double p);

}  // namespace cstop

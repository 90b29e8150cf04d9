#include "cstop/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace cstop {

int configure_threads_from_env() {
  if (const char* env = std::getenv("COLLECTIVE_STOPPING_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) omp_set_num_threads(n);
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace cstop

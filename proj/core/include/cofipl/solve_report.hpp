#pragma once

#include "cofipl/types.hpp"

#include <vector>

namespace cofipl {

/// Result of an iterative torus solver.
struct SolveReport {
  TorusVector w;                        ///< referenced (w[0] == 1)
  int iterations = 0;
  std::vector<double> objective_trace;  ///< f(w_0), f(w_1), ...
  bool converged = false;
  /// Some intermediate vector had an exactly zero entry and was mapped
  /// through the phase_extract(0) = 1 convention.
  bool zero_entry = false;
};

}  // namespace cofipl

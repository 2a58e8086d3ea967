#pragma once

#include "cofipl/pipeline.hpp"
#include "cofipl/synth.hpp"

#include <cstdint>

namespace cofipl::montecarlo {

struct Experiment {
  synth::SceneModel model;
  Index n = 64;
  int runs = 200;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct Summary {
  double mean_rmse = 0.0;
  double std_error = 0.0;
  int fallbacks = 0;  ///< runs where the chain fell back to the naive estimate
};

/// Phase history of run `r`: uniform in (-pi, pi] for q >= 1, zero for q = 0.
RVector truth_phases(const Experiment& ex, int r);

/// Patch of run `r`; the same for every chain so comparisons share noise.
PixelPatch run_patch(const Experiment& ex, int r);

/// sqrt(mean_{q>=1} wrap(est_q - truth_q)^2)
double phase_rmse(const RVector& estimate, const RVector& truth);

Summary evaluate(const Experiment& ex, const pipeline::ChainConfig& chain);

/// The naive arg(S_{q,0}) baseline under the same draws.
Summary evaluate_naive(const Experiment& ex);

}  // namespace cofipl::montecarlo

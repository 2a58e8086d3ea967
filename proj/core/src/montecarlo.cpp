#include "cofipl/montecarlo.hpp"

#include "cofipl/ops.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cofipl::montecarlo {

namespace {

template <typename Estimate>
Summary summarize(const Experiment& ex, Estimate&& estimate) {
  if (ex.runs < 1) throw InvalidArgument("montecarlo: runs must be >= 1");
  if (ex.n < 1) throw InvalidArgument("montecarlo: n must be >= 1");
  ex.model.validate();
  std::vector<double> rmse(static_cast<std::size_t>(ex.runs));
  std::vector<char> fell_back(rmse.size(), 0);
  pipeline::for_each_index(ex.runs, ex.threads, [&](Index r) {
    const int run = static_cast<int>(r);
    bool fallback = false;
    const RVector est = estimate(run_patch(ex, run), fallback);
    rmse[r] = phase_rmse(est, truth_phases(ex, run));
    fell_back[r] = fallback ? 1 : 0;
  });
  Summary s;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < rmse.size(); ++i) {
    sum += rmse[i];
    sum_sq += rmse[i] * rmse[i];
    s.fallbacks += fell_back[i];
  }
  const double runs = static_cast<double>(ex.runs);
  s.mean_rmse = sum / runs;
  if (ex.runs > 1) {
    const double var = std::max(0.0, (sum_sq - runs * s.mean_rmse * s.mean_rmse) / (runs - 1.0));
    s.std_error = std::sqrt(var / runs);
  }
  return s;
}

}  // namespace

RVector truth_phases(const Experiment& ex, int r) {
  std::mt19937_64 rng(synth::derive_seed(ex.seed, static_cast<std::uint64_t>(r), 0));
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  RVector theta(ex.model.p);
  theta[0] = 0.0;
  for (Index q = 1; q < theta.size(); ++q) theta[q] = u(rng);
  return theta;
}

PixelPatch run_patch(const Experiment& ex, int r) {
  return synth::sample_patch(ex.model, truth_phases(ex, r), ex.n,
                             synth::derive_seed(ex.seed, static_cast<std::uint64_t>(r), 1));
}

double phase_rmse(const RVector& estimate, const RVector& truth) {
  if (estimate.size() != truth.size() || truth.size() < 2) {
    throw InvalidArgument("phase_rmse: size mismatch");
  }
  double acc = 0.0;
  for (Index q = 1; q < truth.size(); ++q) {
    const double e = wrap_angle((estimate[q] - estimate[0]) - (truth[q] - truth[0]));
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(truth.size() - 1));
}

Summary evaluate(const Experiment& ex, const pipeline::ChainConfig& chain) {
  chain.validate();
  return summarize(ex, [&](const PixelPatch& patch, bool& fallback) {
    pipeline::PatchResult res = pipeline::process_patch(patch, chain);
    fallback = (res.flags & pipeline::kFlagFallback) != 0;
    return res.phases;
  });
}

Summary evaluate_naive(const Experiment& ex) {
  return summarize(ex, [](const PixelPatch& patch, bool& fallback) {
    fallback = false;
    return pipeline::naive_phases(patch);
  });
}

}  // namespace cofipl::montecarlo

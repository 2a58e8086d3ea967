#include "cofipl/estimators.hpp"
#include "cofipl/mm.hpp"
#include "cofipl/objectives.hpp"
#include "cofipl/pipeline.hpp"
#include "cofipl/regularizers.hpp"
#include "cofipl/riemann.hpp"
#include "cofipl/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace cofipl;

constexpr int kP = 31;
constexpr Index kN = 64;

PixelPatch bench_patch() {
  synth::SceneModel model;
  model.p = kP;
  model.rho = 0.9;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  RVector theta(kP);
  theta[0] = 0.0;
  for (int q = 1; q < kP; ++q) theta[q] = u(rng);
  return synth::sample_patch(model, theta, kN, 11);
}

const PixelPatch& patch() {
  static const PixelPatch p = bench_patch();
  return p;
}

/// Shrunk phase-only plug-in: positive definite, so every objective applies.
const HermitianMatrix& plug_in() {
  static const HermitianMatrix s = regularizers::apply(
      regularizers::parse_regularizer("shrinkage:0.1"),
      estimators::phase_only_scm(patch()));
  return s;
}

objectives::ObjectiveKind kind_of(int64_t i) {
  return static_cast<objectives::ObjectiveKind>(i);
}

void BM_Estimator(benchmark::State& state) {
  estimators::EstimatorConfig cfg;
  cfg.kind = static_cast<estimators::EstimatorKind>(state.range(0));
  state.SetLabel(estimators::to_string(cfg.kind));
  for (auto _ : state) benchmark::DoNotOptimize(estimators::estimate(patch(), cfg));
}
BENCHMARK(BM_Estimator)->DenseRange(0, 3);

void BM_Regularizer(benchmark::State& state) {
  static const char* specs[] = {"shrinkage:0.1", "lowrank:1", "taper:9"};
  const auto spec = regularizers::parse_regularizer(specs[state.range(0)]);
  state.SetLabel(specs[state.range(0)]);
  const HermitianMatrix s = estimators::phase_only_scm(patch());
  for (auto _ : state) benchmark::DoNotOptimize(regularizers::apply(spec, s));
}
BENCHMARK(BM_Regularizer)->DenseRange(0, 2);

void BM_MM(benchmark::State& state) {
  const auto obj = objectives::Objective::build(kind_of(state.range(0)), plug_in());
  state.SetLabel(objectives::to_string(obj.kind()));
  int iters = 0;
  for (auto _ : state) {
    const SolveReport r = mm::mm_solve(obj.kernel());
    iters = r.iterations;
    benchmark::DoNotOptimize(r.w);
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_MM)->Arg(0)->Arg(1);

void BM_Riemann(benchmark::State& state) {
  const auto obj = objectives::Objective::build(kind_of(state.range(0)), plug_in());
  riemann::RiemannConfig cfg;
  cfg.method = state.range(1) == 0 ? riemann::Method::GD : riemann::Method::CG;
  state.SetLabel(objectives::to_string(obj.kind()) + "/" + riemann::to_string(cfg.method));
  int iters = 0;
  for (auto _ : state) {
    const SolveReport r = riemann::riemann_solve(obj, cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.w);
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_Riemann)->ArgsProduct({{0, 1, 2}, {0, 1}});

void BM_EMI(benchmark::State& state) {
  const auto obj = objectives::Objective::build(objectives::ObjectiveKind::KL, plug_in());
  for (auto _ : state) benchmark::DoNotOptimize(mm::emi_relax(obj.kernel()));
}
BENCHMARK(BM_EMI);

void BM_ProcessPatch(benchmark::State& state) {
  pipeline::ChainConfig chain;
  chain.estimator.kind = estimators::EstimatorKind::PhaseOnly;
  chain.regularizer = regularizers::parse_regularizer("taper:9");
  chain.objective = objectives::ObjectiveKind::LS;
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::process_patch(patch(), chain));
}
BENCHMARK(BM_ProcessPatch);

}  // namespace

BENCHMARK_MAIN();

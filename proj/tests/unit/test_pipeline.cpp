#include "cofipl/estimators.hpp"
#include "cofipl/montecarlo.hpp"
#include "cofipl/ops.hpp"
#include "cofipl/pipeline.hpp"
#include "cofipl/synth.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace cofipl;
using namespace cofipl::pipeline;

namespace {

// Every pixel is w_theta o a with a random positive real vector, so every
// windowed sample covariance has the exact phase structure.
ImageStack noise_free_stack(const RVector& theta, Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  ImageStack s(theta.size(), rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      for (Index t = 0; t < theta.size(); ++t)
        s.at(r, c, t) = std::complex<float>(std::polar(u(rng), theta[t]));
  return s;
}

ImageStack random_stack(Index p, Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  ImageStack s(p, rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      for (Index t = 0; t < p; ++t) s.at(r, c, t) = std::complex<float>(oracle::cgauss(rng));
  return s;
}

CMatrix window_samples(const ImageStack& s, Index top, Index left, Index h, Index w) {
  CMatrix x(s.p(), h * w);
  Index k = 0;
  for (Index r = top; r < top + h; ++r)
    for (Index c = left; c < left + w; ++c, ++k)
      for (Index t = 0; t < s.p(); ++t) x(t, k) = Complex(s.at(r, c, t));
  return x;
}

}  // namespace

TEST(Naive, SameImageIsZero) {
  const NaiveImage img = naive_interferogram(random_stack(3, 10, 10, 1), 2, 2, {4, 4});
  for (std::size_t i = 0; i < img.phase.size(); ++i) {
    if (img.flags[i] & kFlagBorder) continue;
    EXPECT_EQ(img.phase[i], 0.0f);
  }
}

TEST(Naive, NoiseFreeEqualsPhaseDifference) {
  const RVector theta = (RVector(3) << 0.0, 2.5, -1.0).finished();
  const NaiveImage img = naive_interferogram(noise_free_stack(theta, 9, 9, 2), 1, 2, {3, 3});
  const float expect = static_cast<float>(oracle::wrap(theta[1] - theta[2]));
  for (std::size_t i = 0; i < img.phase.size(); ++i) {
    if (img.flags[i] & kFlagBorder) continue;
    EXPECT_NEAR(img.phase[i], expect, 1e-6);
  }
}

TEST(Naive, MatchesWindowedScmOracle) {
  const ImageStack s = random_stack(4, 12, 11, 3);
  const Window w{5, 4};
  const NaiveImage img = naive_interferogram(s, 3, 1, w);
  for (Index r = 0; r < 12; ++r)
    for (Index c = 0; c < 11; ++c) {
      const Index top = r - 2, left = c - 1;
      const std::size_t idx = static_cast<std::size_t>(r * 11 + c);
      if (top < 0 || left < 0 || top + 5 > 12 || left + 4 > 11) {
        EXPECT_EQ(img.flags[idx], kFlagBorder);
        continue;
      }
      const CMatrix sc = oracle::scm(window_samples(s, top, left, 5, 4));
      EXPECT_NEAR(img.phase[idx], std::arg(sc(3, 1)), 1e-5);
    }
}

TEST(Run, NoiseFreeStackAnySolver) {
  const RVector theta = (RVector(5) << 0.0, 0.4, -2.0, 3.0, 1.2).finished();
  const ImageStack s = noise_free_stack(theta, 12, 12, 4);
  struct Case {
    objectives::ObjectiveKind obj;
    SolverKind solver;
  };
  for (const Case c : {Case{objectives::ObjectiveKind::LS, SolverKind::MM},
                       Case{objectives::ObjectiveKind::KL, SolverKind::MM},
                       Case{objectives::ObjectiveKind::LS, SolverKind::EMI},
                       Case{objectives::ObjectiveKind::KL, SolverKind::Riemann},
                       Case{objectives::ObjectiveKind::WLS, SolverKind::Riemann}}) {
    RunConfig cfg;
    cfg.chain.objective = c.obj;
    cfg.chain.solver = c.solver;
    cfg.chain.mm.tol = 1e-15;
    cfg.chain.mm.max_iter = 20000;
    cfg.chain.riemann.grad_tol = 1e-10;
    const InterferogramSet out = run(s, cfg);
    double worst = 0.0;
    for (Index r = 0; r < 12; ++r)
      for (Index col = 0; col < 12; ++col) {
        if (out.flags[static_cast<std::size_t>(r * 12 + col)] & kFlagBorder) continue;
        worst = std::max(worst, oracle::max_angle_error(out.phases.pixel(r, col), theta));
      }
    EXPECT_LT(worst, 1e-5) << objectives::to_string(c.obj) << "+" << to_string(c.solver);
  }
}

TEST(Run, DeterministicAndThreadIndependent) {
  const ImageStack s = random_stack(6, 20, 17, 5);
  RunConfig cfg;
  cfg.pairs = "all";
  cfg.threads = 1;
  const InterferogramSet a = run(s, cfg);
  cfg.threads = 4;
  const InterferogramSet b = run(s, cfg);
  const InterferogramSet c = run(s, cfg);
  EXPECT_EQ(a.interferograms, b.interferograms);
  EXPECT_EQ(b.interferograms, c.interferograms);
  EXPECT_EQ(a.flags, b.flags);
  EXPECT_EQ(a.phases.phases, b.phases.phases);
}

TEST(Run, OutputClosureIsExact) {
  const ImageStack s = random_stack(5, 14, 14, 6);
  RunConfig cfg;
  cfg.pairs = "all";
  const InterferogramSet out = run(s, cfg);
  EXPECT_EQ(output_closure_residual(out), 0u);
  EXPECT_LT(output_closure_residual_float(out), 1e-5);
  for (const auto& img : out.interferograms)
    for (float v : img) {
      EXPECT_GT(v, -std::numbers::pi_v<float>);
      EXPECT_LE(v, std::numbers::pi_v<float>);
    }
}

TEST(Run, WindowCoverage) {
  const ImageStack s = random_stack(3, 15, 13, 7);
  for (const Window w : {Window{8, 8}, Window{3, 5}}) {
    RunConfig cfg;
    cfg.window = w;
    const InterferogramSet out = run(s, cfg);
    int processed = 0;
    for (auto f : out.flags) processed += (f & kFlagBorder) ? 0 : 1;
    EXPECT_EQ(processed, (15 - w.height + 1) * (13 - w.width + 1));
  }
  RunConfig shrink;
  shrink.border = BorderPolicy::Shrink;
  const InterferogramSet out = run(s, shrink);
  for (auto f : out.flags) EXPECT_EQ(f & kFlagBorder, 0);
}

TEST(WindowBounds, CenteredAndClipped) {
  const WindowBounds b = window_bounds(20, 20, 10, 10, {8, 8}, BorderPolicy::Skip);
  EXPECT_EQ(b.top, 7);
  EXPECT_EQ(b.left, 7);
  EXPECT_TRUE(b.inside);
  const WindowBounds odd = window_bounds(20, 20, 10, 10, {3, 5}, BorderPolicy::Skip);
  EXPECT_EQ(odd.top, 9);
  EXPECT_EQ(odd.left, 8);
  EXPECT_FALSE(window_bounds(20, 20, 1, 10, {8, 8}, BorderPolicy::Skip).inside);
  const WindowBounds clip = window_bounds(20, 20, 1, 19, {8, 8}, BorderPolicy::Shrink);
  EXPECT_TRUE(clip.inside);
  EXPECT_EQ(clip.top, 0);
  EXPECT_EQ(clip.height, 6);
  EXPECT_EQ(clip.left, 16);
  EXPECT_EQ(clip.width, 4);
}

TEST(Run, FallbackOnSingularPlugIn) {
  // identical pixels: rank-one SCM with all-ones modulus, singular for KL
  ImageStack s(3, 6, 6);
  for (Index r = 0; r < 6; ++r)
    for (Index c = 0; c < 6; ++c) {
      s.at(r, c, 0) = {1.0f, 0.0f};
      s.at(r, c, 1) = {0.0f, 1.0f};
      s.at(r, c, 2) = {-1.0f, 0.0f};
    }
  RunConfig cfg;
  cfg.window = {3, 3};
  cfg.chain.objective = objectives::ObjectiveKind::KL;
  const InterferogramSet out = run(s, cfg);
  const std::size_t centre = 2 * 6 + 2;
  EXPECT_TRUE(out.flags[centre] & kFlagFallback);
  EXPECT_NEAR(out.phases.at(2, 2, 1), std::numbers::pi / 2, 1e-6);
  EXPECT_NEAR(std::abs(out.phases.at(2, 2, 2)), std::numbers::pi, 1e-6);
  EXPECT_THROW(process_patch_strict(extract_patch(s, window_bounds(6, 6, 2, 2, cfg.window, cfg.border)), cfg.chain),
               NumericalError);
}

TEST(Run, RampIsRecovered) {
  synth::SceneModel m;
  m.p = 4;
  m.rho = 0.9;
  m.phase_field = synth::linear_phase_field(4, 0.0, 0.0, 0.12);
  const auto scene = synth::render_stack(m, 20, 48, 8);
  RunConfig cfg;
  const InterferogramSet out = run(scene.stack, cfg);
  // correlate the (2,1) interferogram with the wrapped truth along interior pixels
  std::vector<double> est, truth;
  for (Index r = 0; r < 20; ++r)
    for (Index c = 0; c < 48; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * 48 + c);
      if (out.flags[idx] & kFlagBorder) continue;
      const double t = oracle::wrap(scene.truth.at(r, c, 1));
      // compare as unit vectors to stay clear of the wrap discontinuity
      est.push_back(std::cos(out.interferograms[0][idx]));
      truth.push_back(std::cos(t));
      est.push_back(std::sin(out.interferograms[0][idx]));
      truth.push_back(std::sin(t));
    }
  const double n = static_cast<double>(est.size());
  double me = 0, mt = 0;
  for (std::size_t i = 0; i < est.size(); ++i) me += est[i] / n, mt += truth[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    sxy += (est[i] - me) * (truth[i] - mt);
    sxx += (est[i] - me) * (est[i] - me);
    syy += (truth[i] - mt) * (truth[i] - mt);
  }
  EXPECT_GT(sxy / std::sqrt(sxx * syy), 0.9);
}

TEST(Pairs, Parsing) {
  EXPECT_EQ(parse_pairs("ref", 3), (std::vector<PhasePair>{{1, 0}, {2, 0}}));
  EXPECT_EQ(parse_pairs("all", 3).size(), 3u);
  EXPECT_EQ(parse_pairs("2-1, 3-1", 3), (std::vector<PhasePair>{{1, 0}, {2, 0}}));
  EXPECT_EQ(pairs_to_string(parse_pairs("3-2", 3)), "3-2");
  EXPECT_THROW(parse_pairs("0-1", 3), InvalidArgument);
  EXPECT_THROW(parse_pairs("4-1", 3), InvalidArgument);
  EXPECT_THROW(parse_pairs("21", 3), InvalidArgument);
}

TEST(RunConfig, Validation) {
  RunConfig cfg;
  cfg.chain.objective = objectives::ObjectiveKind::WLS;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.chain.solver = SolverKind::Riemann;
  EXPECT_NO_THROW(cfg.validate());
  cfg.chain.estimator.kind = estimators::EstimatorKind::Tyler;
  cfg.window = {4, 4};
  EXPECT_THROW(cfg.validate(20), InvalidArgument);
  EXPECT_NO_THROW(cfg.validate(10));
  cfg.window = {0, 4};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(ClosureMap, PlugInResidual) {
  const ImageStack s = random_stack(4, 10, 10, 9);
  const Window w{4, 4};
  const std::vector<float> map = closure_map(s, w, {}, {});
  for (Index r = 0; r < 10; ++r)
    for (Index c = 0; c < 10; ++c) {
      const float v = map[static_cast<std::size_t>(r * 10 + c)];
      const Index top = r - 1, left = c - 1;
      if (top < 0 || left < 0 || top + 4 > 10 || left + 4 > 10) {
        EXPECT_TRUE(std::isnan(v));
        continue;
      }
      const double expect = phase_closure_residual(HermitianMatrix(oracle::scm(window_samples(s, top, left, 4, 4))));
      EXPECT_NEAR(v, expect, 1e-5);
    }
}

TEST(Rmse, ReferencedComparison) {
  PhaseImage truth(3, 1, 2), est(3, 1, 2);
  truth.set_pixel(0, 0, (RVector(3) << 1.0, 2.0, 3.0).finished());
  truth.set_pixel(0, 1, (RVector(3) << 0.0, 0.0, 0.0).finished());
  est.set_pixel(0, 0, (RVector(3) << 0.0, 1.1, 2.0).finished());
  est.set_pixel(0, 1, (RVector(3) << 0.0, 0.0, 0.0).finished());
  EXPECT_NEAR(phase_rmse(est, truth), std::sqrt(0.01 / 4.0), 1e-12);
  EXPECT_NEAR(phase_rmse(est, truth, {kFlagBorder, 0}), 0.0, 1e-12);
}

TEST(MonteCarlo, SharedDrawsAndNaiveBaseline) {
  montecarlo::Experiment ex;
  ex.model.p = 5;
  ex.model.phase_field = synth::linear_phase_field(5, 0.0);
  ex.n = 64;
  ex.runs = 20;
  EXPECT_EQ(montecarlo::run_patch(ex, 3).samples(), montecarlo::run_patch(ex, 3).samples());
  EXPECT_EQ(montecarlo::truth_phases(ex, 2)[0], 0.0);
  ChainConfig chain;
  const auto s = montecarlo::evaluate(ex, chain);
  const auto naive = montecarlo::evaluate_naive(ex);
  EXPECT_GT(s.mean_rmse, 0.0);
  EXPECT_LT(s.mean_rmse, naive.mean_rmse);
  EXPECT_EQ(s.fallbacks, 0);
}

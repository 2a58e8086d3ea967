#pragma once

#include "cofipl/image.hpp"
#include "cofipl/types.hpp"

#include <cstdint>
#include <random>

namespace cofipl::synth {

enum class Texture { Gaussian, Gamma };

/// Phase history theta_q(row, col) = base[q] + q * (row_rate * row + col_rate * col).
/// base[0] must be 0 so the truth is already referenced to the first image.
struct PhaseField {
  RVector base;
  double row_rate = 0.0;
  double col_rate = 0.0;

  RVector at(Index row, Index col) const;
};

/// Exponential coherence Upsilon_ql = rho^|q-l|, per-image standard
/// deviations `sigmas`, and an optional Gamma texture (unit mean) turning the
/// Gaussian model into a compound-Gaussian one.
struct SceneModel {
  int p = 10;
  double rho = 0.9;
  RVector sigmas;  ///< empty means all ones
  Texture texture = Texture::Gaussian;
  double gamma_shape = 1.0;
  PhaseField phase_field;

  void validate() const;
  RVector sigma_vector() const;
  /// Psi = Upsilon o sigma sigma^T
  RMatrix psi() const;
};

/// Uniform phase history base[q] = q * step with a ramp, for the CLI.
PhaseField linear_phase_field(int p, double step, double row_rate = 0.0, double col_rate = 0.0);

/// Psi o w_theta w_theta^H
HermitianMatrix build_sigma(const SceneModel& model, const RVector& theta);

/// Hermitian square root factor of a PSD matrix (negative eigenvalues from
/// rounding are clamped to zero).
CMatrix hermitian_sqrt(const HermitianMatrix& sigma);

/// Counter-based seed derivation: (seed, stream, substream) -> 64-bit seed
/// of an independent mt19937_64 stream (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

/// Draw x = sqrt(tau) L z with z standard circular complex Gaussian and tau
/// Gamma(shape, 1/shape) (or 1 for the Gaussian texture).
CVector draw_sample(const CMatrix& factor, const SceneModel& model, std::mt19937_64& rng);

/// n independent draws from CN(0, Sigma) or the textured model, fully
/// determined by `seed`.
PixelPatch sample_patch(const SceneModel& model, const RVector& theta, Index n, std::uint64_t seed);

struct RenderedScene {
  ImageStack stack;
  PhaseImage truth;
};

/// One independent draw per pixel, with the pixel's phase from the model's
/// phase field and a per-pixel stream derived from (seed, row, col).
RenderedScene render_stack(const SceneModel& model, Index rows, Index cols, std::uint64_t seed);

}  // namespace cofipl::synth

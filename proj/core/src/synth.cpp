#include "cofipl/synth.hpp"

#include "cofipl/spectral.hpp"

#include <cmath>
#include <limits>

namespace cofipl::synth {

RVector PhaseField::at(Index row, Index col) const {
  RVector theta = base;
  const double ramp = row_rate * static_cast<double>(row) + col_rate * static_cast<double>(col);
  for (Index q = 0; q < theta.size(); ++q) {
    theta[q] += static_cast<double>(q) * ramp;
  }
  return theta;
}

PhaseField linear_phase_field(int p, double step, double row_rate, double col_rate) {
  PhaseField field;
  field.base = RVector::LinSpaced(p, 0.0, step * (p - 1));
  if (p == 1) field.base.setZero();
  field.row_rate = row_rate;
  field.col_rate = col_rate;
  return field;
}

void SceneModel::validate() const {
  if (p < 2) throw InvalidArgument("scene: p must be >= 2");
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("scene: rho must lie in (0, 1]");
  if (sigmas.size() != 0) {
    if (sigmas.size() != p) throw InvalidArgument("scene: sigmas must have length p");
    if (!(sigmas.array() > 0.0).all()) throw InvalidArgument("scene: sigmas must be > 0");
  }
  if (texture == Texture::Gamma && !(gamma_shape > 0.0)) {
    throw InvalidArgument("scene: gamma shape must be > 0");
  }
  if (phase_field.base.size() != 0 && phase_field.base.size() != p) {
    throw InvalidArgument("scene: phase field base must have length p");
  }
}

RVector SceneModel::sigma_vector() const {
  return sigmas.size() == 0 ? RVector::Ones(p) : sigmas;
}

RMatrix SceneModel::psi() const {
  const RVector s = sigma_vector();
  RMatrix psi(p, p);
  for (int q = 0; q < p; ++q) {
    for (int l = 0; l < p; ++l) {
      psi(q, l) = std::pow(rho, std::abs(q - l)) * s[q] * s[l];
    }
  }
  return psi;
}

HermitianMatrix build_sigma(const SceneModel& model, const RVector& theta) {
  model.validate();
  if (theta.size() != model.p) {
    throw InvalidArgument("build_sigma: theta must have length p");
  }
  const TorusVector w = TorusVector::from_phases(theta);
  const CMatrix m = w.entries().asDiagonal() * model.psi().cast<Complex>() *
                    w.entries().conjugate().asDiagonal();
  return HermitianMatrix::symmetrize(m);
}

CMatrix hermitian_sqrt(const HermitianMatrix& sigma) {
  const spectral::Decomposition e = spectral::eigh(sigma);
  // Eigenvalues at rounding level are zero; their sqrt would be ~1e-8.
  const double floor = e.values.cwiseAbs().maxCoeff() * static_cast<double>(e.values.size()) *
                       std::numeric_limits<double>::epsilon();
  return spectral::apply_function(e, [floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ (substream * 0xD1B54A32D192ED03ULL));
}

CVector draw_sample(const CMatrix& factor, const SceneModel& model, std::mt19937_64& rng) {
  const Index p = factor.rows();
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector z(p);
  for (Index i = 0; i < p; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    z[i] = Complex(re, im);
  }
  double tau = 1.0;
  if (model.texture == Texture::Gamma) {
    std::gamma_distribution<double> gamma(model.gamma_shape, 1.0 / model.gamma_shape);
    tau = gamma(rng);
  }
  return std::sqrt(tau) * (factor * z);
}

PixelPatch sample_patch(const SceneModel& model, const RVector& theta, Index n,
                        std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample_patch: n must be >= 1");
  const CMatrix factor = hermitian_sqrt(build_sigma(model, theta));
  std::mt19937_64 rng(derive_seed(seed, 0));
  CMatrix x(model.p, n);
  for (Index i = 0; i < n; ++i) {
    x.col(i) = draw_sample(factor, model, rng);
  }
  return PixelPatch(std::move(x));
}

RenderedScene render_stack(const SceneModel& model, Index rows, Index cols, std::uint64_t seed) {
  model.validate();
  if (rows < 1 || cols < 1) throw InvalidArgument("render_stack: empty image");
  const Index p = model.p;
  PhaseField field = model.phase_field;
  if (field.base.size() == 0) field.base = RVector::Zero(p);
  if (field.base[0] != 0.0) {
    throw InvalidArgument("render_stack: phase field must have base[0] == 0");
  }

  RenderedScene out{ImageStack(p, rows, cols), PhaseImage(p, rows, cols)};
  // Sigma(theta) = D Psi D^H, so its Hermitian square root is D Psi^{1/2} D^H.
  const CMatrix psi_sqrt = hermitian_sqrt(HermitianMatrix::from_real(model.psi()));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const RVector theta = field.at(r, c);
      const CVector w = TorusVector::from_phases(theta).entries();
      const CMatrix factor = w.asDiagonal() * psi_sqrt * w.conjugate().asDiagonal();
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r) + 1,
                                      static_cast<std::uint64_t>(c) + 1));
      out.stack.set_pixel(r, c, draw_sample(factor, model, rng));
      out.truth.set_pixel(r, c, theta);
    }
  }
  return out;
}

}  // namespace cofipl::synth

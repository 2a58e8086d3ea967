#include "cofipl/estimators.hpp"

#include "cofipl/ops.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace cofipl::estimators {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Scm: return "scm";
    case EstimatorKind::Tyler: return "tyler";
    case EstimatorKind::SampleCorrelation: return "correlation";
    case EstimatorKind::PhaseOnly: return "phase-only";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "scm") return EstimatorKind::Scm;
  if (name == "tyler") return EstimatorKind::Tyler;
  if (name == "correlation" || name == "sample-correlation") {
    return EstimatorKind::SampleCorrelation;
  }
  if (name == "phase-only" || name == "phaseonly") return EstimatorKind::PhaseOnly;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (!(tyler_tol > 0.0)) {
    throw InvalidArgument("estimator: tyler_tol must be > 0");
  }
  if (tyler_max_iter < 1) {
    throw InvalidArgument("estimator: tyler_max_iter must be >= 1");
  }
}

HermitianMatrix scm(const PixelPatch& patch) {
  const CMatrix& x = patch.samples();
  CMatrix s = x * x.adjoint() / static_cast<double>(patch.n());
  return HermitianMatrix::symmetrize(s);
}

namespace detail {

CMatrix m_estimator_map(const PixelPatch& patch, const CMatrix& sigma,
                        const WeightFunction& u) {
  const Index p = patch.p();
  const Index n = patch.n();
  Eigen::LLT<CMatrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("M-estimator: iterate is not positive definite");
  }
  // t_i = |L^{-1} x_i|^2
  const CMatrix white = llt.matrixL().solve(patch.samples());
  CMatrix weighted(p, n);
  for (Index i = 0; i < n; ++i) {
    const double t = white.col(i).squaredNorm();
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw NumericalError("M-estimator: non-positive quadratic form");
    }
    weighted.col(i) = u(t, p) * patch.sample(i);
  }
  CMatrix next = weighted * patch.samples().adjoint() / static_cast<double>(n);
  return 0.5 * (next + next.adjoint());
}

CMatrix m_estimate(const PixelPatch& patch, const WeightFunction& u, double tol,
                   int max_iter, bool normalize_trace) {
  const Index p = patch.p();
  CMatrix sigma = CMatrix::Identity(p, p);
  for (int it = 0; it < max_iter; ++it) {
    CMatrix next = m_estimator_map(patch, sigma, u);
    if (normalize_trace) {
      const double tr = next.diagonal().real().sum();
      if (!(tr > 0.0)) {
        throw NumericalError("M-estimator: degenerate iterate");
      }
      next *= static_cast<double>(p) / tr;
    }
    const double change = (next - sigma).norm() / next.norm();
    sigma = std::move(next);
    if (change < tol) {
      return sigma;
    }
  }
  throw ConvergenceError("M-estimator: no convergence after " +
                             std::to_string(max_iter) + " iterations",
                         sigma);
}

}  // namespace detail

HermitianMatrix tyler(const PixelPatch& patch, const EstimatorConfig& cfg) {
  cfg.validate();
  if (patch.n() <= patch.p()) {
    throw InvalidArgument("tyler: requires n > p (n = " +
                          std::to_string(patch.n()) +
                          ", p = " + std::to_string(patch.p()) + ")");
  }
  for (Index i = 0; i < patch.n(); ++i) {
    if (patch.sample(i).squaredNorm() == 0.0) {
      throw InvalidArgument("tyler: all-zero sample " + std::to_string(i));
    }
  }
  return HermitianMatrix::symmetrize(detail::m_estimate(
      patch, detail::tyler_weight, cfg.tyler_tol, cfg.tyler_max_iter, true));
}

HermitianMatrix to_correlation(const HermitianMatrix& sigma) {
  const RVector d = sigma.matrix().diagonal().real();
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw InvalidArgument("to_correlation: non-positive diagonal entry " +
                           std::to_string(i));
    }
  }
  const RVector inv_sqrt = d.cwiseSqrt().cwiseInverse();
  CMatrix c = inv_sqrt.cast<Complex>().asDiagonal() * sigma.matrix() *
              inv_sqrt.cast<Complex>().asDiagonal();
  c.diagonal().setOnes();
  return HermitianMatrix::symmetrize(c);
}

HermitianMatrix phase_only_scm(const PixelPatch& patch) {
  const CMatrix y = phase_extract(patch.samples());
  CMatrix t = y * y.adjoint() / static_cast<double>(patch.n());
  t.diagonal().setOnes();
  return HermitianMatrix::symmetrize(t);
}

HermitianMatrix estimate(const PixelPatch& patch, const EstimatorConfig& cfg) {
  switch (cfg.kind) {
    case EstimatorKind::Scm: return scm(patch);
    case EstimatorKind::Tyler: return tyler(patch, cfg);
    case EstimatorKind::SampleCorrelation: return to_correlation(scm(patch));
    case EstimatorKind::PhaseOnly: return phase_only_scm(patch);
  }
  throw InvalidArgument("estimate: unknown estimator kind");
}

}  // namespace cofipl::estimators

#pragma once

#include "cofipl/types.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace cofipl::estimators {

enum class EstimatorKind { Scm, Tyler, SampleCorrelation, PhaseOnly };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Scm;
  double tyler_tol = 1e-8;
  int tyler_max_iter = 100;

  void validate() const;
};

/// Sample covariance (1/n) sum x_i x_i^H.
HermitianMatrix scm(const PixelPatch& patch);

/// Tyler's M-estimator of scatter, normalized to trace p. Requires n > p.
/// Throws ConvergenceError (carrying the last iterate) when the relative
/// Frobenius change does not drop below cfg.tyler_tol within
/// cfg.tyler_max_iter iterations.
HermitianMatrix tyler(const PixelPatch& patch, const EstimatorConfig& cfg = {});

/// diag(S)^{-1/2} S diag(S)^{-1/2}.
HermitianMatrix to_correlation(const HermitianMatrix& sigma);

/// Sample covariance of the phase-only samples phase_extract(x_i).
HermitianMatrix phase_only_scm(const PixelPatch& patch);

/// Dispatch on cfg.kind. SampleCorrelation is to_correlation(scm(patch)).
HermitianMatrix estimate(const PixelPatch& patch, const EstimatorConfig& cfg);

namespace detail {

/// Weight u(t, p) applied to the quadratic form t = x^H Sigma^{-1} x.
using WeightFunction = std::function<double(double t, Index p)>;

inline double tyler_weight(double t, Index p) { return static_cast<double>(p) / t; }
inline double gaussian_weight(double, Index) { return 1.0; }

/// One application of Sigma -> (1/n) sum u(x_i^H Sigma^{-1} x_i) x_i x_i^H.
CMatrix m_estimator_map(const PixelPatch& patch, const CMatrix& sigma,
                        const WeightFunction& u);

/// Fixed-point iteration of m_estimator_map from the identity. When
/// normalize_trace is set every iterate is rescaled to trace p (the fixed
/// point of a scale-invariant weight is defined up to scale).
CMatrix m_estimate(const PixelPatch& patch, const WeightFunction& u, double tol,
                   int max_iter, bool normalize_trace);

}  // namespace detail

}  // namespace cofipl::estimators

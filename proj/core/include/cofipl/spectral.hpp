#pragma once

#include "cofipl/types.hpp"

#include <algorithm>
#include <cmath>

namespace cofipl::spectral {

/// Full Hermitian eigendecomposition, eigenvalues ascending.
struct Decomposition {
  RVector values;
  CMatrix vectors;
};

Decomposition eigh(const HermitianMatrix& m);

/// Smallest and largest eigenvalues.
struct Extremes {
  double min;
  double max;
  double spectral_radius() const { return std::max(std::abs(min), std::abs(max)); }
};

/// Dimension above which extreme eigenvalues are obtained by power iteration
/// instead of a full decomposition.
inline constexpr Index kDenseEigenLimit = 512;

Extremes extreme_eigenvalues(const HermitianMatrix& m);

/// Power iteration on m + shift*I for the largest algebraic eigenvalue of m.
/// Exposed for testing; extreme_eigenvalues calls it above kDenseEigenLimit.
double largest_eigenvalue_power(const HermitianMatrix& m, double tol = 1e-12,
                                int max_iter = 10000);

/// f(m) = V diag(f(lambda)) V^H for a Hermitian m.
template <typename F>
CMatrix apply_function(const Decomposition& e, F&& f) {
  RVector fv = e.values.unaryExpr(f);
  return e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace cofipl::spectral

#include "cofipl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cofipl::spectral {

Decomposition eigh(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigh: eigendecomposition failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double largest_eigenvalue_power(const HermitianMatrix& m, double tol,
                                int max_iter) {
  const Index p = m.size();
  // Gershgorin bound makes m + shift*I positive semi-definite, so the
  // dominant eigenvalue of the shifted matrix is the largest algebraic one.
  const double shift = m.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  CVector v = CVector::Ones(p) / std::sqrt(static_cast<double>(p));
  // Deterministic perturbation so v is unlikely to be orthogonal to the
  // dominant eigenvector.
  for (Index i = 0; i < p; ++i) {
    v[i] += Complex(1e-3 * std::sin(1.0 + i), 1e-3 * std::cos(2.0 + i));
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVector mv = m.matrix() * v + shift * v;
    const double next = std::real(v.dot(mv));
    const double norm = mv.norm();
    if (norm == 0.0) {
      return -shift;
    }
    v = mv / norm;
    if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - shift;
}

Extremes extreme_eigenvalues(const HermitianMatrix& m) {
  if (m.size() <= kDenseEigenLimit) {
    const RVector ev = m.eigenvalues();
    return {ev[0], ev[ev.size() - 1]};
  }
  const double max = largest_eigenvalue_power(m);
  const double min =
      -largest_eigenvalue_power(HermitianMatrix::symmetrize(-m.matrix()));
  return {min, max};
}

}  // namespace cofipl::spectral

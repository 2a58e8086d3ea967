#include "cofipl/types.hpp"

#include "cofipl/ops.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cofipl {

TorusVector::TorusVector(CVector entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw InvalidArgument("TorusVector: length must be at least 2");
  }
  for (Index i = 0; i < entries_.size(); ++i) {
    if (!(std::abs(std::abs(entries_[i]) - 1.0) <= kModulusTolerance)) {
      throw InvalidArgument("TorusVector: entry " + std::to_string(i) +
                            " does not have unit modulus");
    }
  }
}

TorusVector TorusVector::ones(Index p) {
  return TorusVector(CVector::Ones(p));
}

TorusVector TorusVector::from_phases(const RVector& theta) {
  CVector w(theta.size());
  for (Index i = 0; i < theta.size(); ++i) {
    w[i] = std::polar(1.0, theta[i]);
  }
  return TorusVector(std::move(w));
}

TorusVector TorusVector::project(const CVector& v) {
  if (v.size() < 2) {
    throw InvalidArgument("TorusVector: length must be at least 2");
  }
  return TorusVector(phase_extract(v), Unchecked{});
}

RVector TorusVector::phases() const {
  RVector theta(entries_.size());
  for (Index i = 0; i < entries_.size(); ++i) {
    theta[i] = wrap_angle(std::arg(entries_[i]));
  }
  return theta;
}

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("HermitianMatrix: matrix is not square");
  }
  if (m.size() == 0) {
    throw InvalidArgument("HermitianMatrix: empty matrix");
  }
  if (!m.allFinite()) {
    throw InvalidArgument("HermitianMatrix: non-finite entry");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw InvalidArgument("HermitianMatrix: matrix is not Hermitian");
  }
  m_ = 0.5 * (m + m.adjoint());
  m_.diagonal() = m_.diagonal().real().cast<Complex>();
}

HermitianMatrix HermitianMatrix::symmetrize(const CMatrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw InvalidArgument("HermitianMatrix: matrix is not square");
  }
  CMatrix h = 0.5 * (m + m.adjoint());
  h.diagonal() = h.diagonal().real().cast<Complex>();
  return HermitianMatrix(std::move(h), Unchecked{});
}

HermitianMatrix HermitianMatrix::from_real(const RMatrix& m) {
  return HermitianMatrix(m.cast<Complex>());
}

HermitianMatrix HermitianMatrix::identity(Index p) {
  return HermitianMatrix(CMatrix::Identity(p, p), Unchecked{});
}

RVector HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

PixelPatch::PixelPatch(CMatrix samples) : samples_(std::move(samples)) {
  if (samples_.cols() < 1) {
    throw InvalidArgument("PixelPatch: at least one sample is required");
  }
  if (samples_.rows() < 1) {
    throw InvalidArgument("PixelPatch: samples must be non-empty");
  }
}

}  // namespace cofipl

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace cofipl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad parameter range, shape
/// mismatch, broken invariant on construction).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure hit a degenerate input (singular matrix, zero entry,
/// non-definite kernel without safeguard).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure ran out of iterations. Carries the last iterate so
/// callers can inspect or reuse it.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, CMatrix last_iterate)
      : NumericalError(what), last_iterate_(std::move(last_iterate)) {}

  const CMatrix& last_iterate() const noexcept { return last_iterate_; }

 private:
  CMatrix last_iterate_;
};

/// Length-p complex vector whose entries all have unit modulus (a point of the
/// torus T_p). Construction validates the invariant; use `TorusVector::project`
/// to map an arbitrary vector onto the torus.
class TorusVector {
 public:
  static constexpr double kModulusTolerance = 1e-12;

  explicit TorusVector(CVector entries);

  static TorusVector ones(Index p);
  static TorusVector from_phases(const RVector& theta);
  /// Entrywise phase extraction; zero entries map to 1.
  static TorusVector project(const CVector& v);

  const CVector& entries() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.size(); }
  Complex operator[](Index i) const { return entries_[i]; }

  /// Arguments of the entries, wrapped to (-pi, pi].
  RVector phases() const;

 private:
  struct Unchecked {};
  TorusVector(CVector entries, Unchecked) : entries_(std::move(entries)) {}

  CVector entries_;
};

/// Square complex matrix equal to its conjugate transpose. The stored matrix
/// is exactly Hermitian (real diagonal, mirrored off-diagonal) after
/// construction.
class HermitianMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-10;

  /// Validates conjugate symmetry within kSymmetryTolerance (relative to the
  /// largest entry modulus), then stores the exactly symmetrized matrix.
  explicit HermitianMatrix(const CMatrix& m);

  /// (m + m^H) / 2 without validation. Use for results of arithmetic that is
  /// Hermitian up to rounding.
  static HermitianMatrix symmetrize(const CMatrix& m);
  static HermitianMatrix from_real(const RMatrix& m);
  static HermitianMatrix identity(Index p);

  const CMatrix& matrix() const noexcept { return m_; }
  Index size() const noexcept { return m_.rows(); }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.diagonal().real().sum(); }

  /// Eigenvalues in ascending order.
  RVector eigenvalues() const;

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}

  CMatrix m_;
};

/// n complex samples of length p taken from one sliding window. Stored as a
/// p x n matrix, one sample per column.
class PixelPatch {
 public:
  explicit PixelPatch(CMatrix samples);

  const CMatrix& samples() const noexcept { return samples_; }
  Index p() const noexcept { return samples_.rows(); }
  Index n() const noexcept { return samples_.cols(); }
  auto sample(Index i) const { return samples_.col(i); }

 private:
  CMatrix samples_;
};

}  // namespace cofipl

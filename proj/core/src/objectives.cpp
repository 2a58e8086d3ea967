#include "cofipl/objectives.hpp"

#include "cofipl/ops.hpp"
#include "cofipl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cofipl::objectives {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::KL: return "kl";
    case ObjectiveKind::LS: return "ls";
    case ObjectiveKind::WLS: return "wls";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "kl" || name == "KL") return ObjectiveKind::KL;
  if (name == "ls" || name == "LS") return ObjectiveKind::LS;
  if (name == "wls" || name == "WLS") return ObjectiveKind::WLS;
  throw InvalidArgument("unknown objective '" + std::string(name) + "'");
}

namespace {

void check_same_size(const HermitianMatrix& sigma, const RMatrix& psi) {
  if (psi.rows() != sigma.size() || psi.cols() != sigma.size()) {
    throw InvalidArgument("objective: modulus matrix has the wrong size");
  }
}

RMatrix inverse_modulus(const RMatrix& psi) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(psi);
  if (es.info() != Eigen::Success) {
    throw NumericalError("kl_kernel: eigendecomposition of the modulus failed");
  }
  const RVector& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (!(largest > 0.0) || smallest < kMinReciprocalCondition * largest) {
    throw NumericalError(
        "kl_kernel: modulus of the plug-in is numerically singular; "
        "apply shrinkage or low-rank regularization");
  }
  RMatrix inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                es.eigenvectors().transpose();
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

HermitianMatrix kl_kernel(const HermitianMatrix& sigma_tilde, const RMatrix& psi) {
  check_same_size(sigma_tilde, psi);
  const RMatrix inv = inverse_modulus(psi);
  CMatrix m = inv.cast<Complex>().cwiseProduct(sigma_tilde.matrix());
  return HermitianMatrix::symmetrize(m);
}

HermitianMatrix kl_kernel(const HermitianMatrix& sigma_tilde) {
  return kl_kernel(sigma_tilde, modulus(sigma_tilde));
}

HermitianMatrix ls_kernel(const HermitianMatrix& sigma_tilde, const RMatrix& psi) {
  check_same_size(sigma_tilde, psi);
  CMatrix m = -psi.cast<Complex>().cwiseProduct(sigma_tilde.matrix());
  return HermitianMatrix::symmetrize(m);
}

HermitianMatrix ls_kernel(const HermitianMatrix& sigma_tilde) {
  return ls_kernel(sigma_tilde, modulus(sigma_tilde));
}

Objective::Objective(ObjectiveKind kind, HermitianMatrix sigma, RMatrix psi)
    : kind_(kind), sigma_(std::move(sigma)), psi_(std::move(psi)) {
  switch (kind_) {
    case ObjectiveKind::KL:
      kernel_ = kl_kernel(sigma_, psi_);
      break;
    case ObjectiveKind::LS:
      kernel_ = ls_kernel(sigma_, psi_);
      break;
    case ObjectiveKind::WLS: {
      const spectral::Decomposition e = spectral::eigh(sigma_);
      const double largest = e.values.cwiseAbs().maxCoeff();
      if (!(e.values.minCoeff() > 1e-14 * largest)) {
        throw NumericalError("WLS objective: plug-in is not positive definite");
      }
      sigma_inv_ = spectral::apply_function(e, [](double x) { return 1.0 / x; });
      sigma_inv_ = 0.5 * (sigma_inv_ + sigma_inv_.adjoint()).eval();
      sigma_inv_sqrt_ =
          spectral::apply_function(e, [](double x) { return 1.0 / std::sqrt(x); });
      sigma_inv_sqrt_ = 0.5 * (sigma_inv_sqrt_ + sigma_inv_sqrt_.adjoint()).eval();
      break;
    }
  }
}

Objective Objective::build(ObjectiveKind kind, const HermitianMatrix& sigma_tilde) {
  return Objective(kind, sigma_tilde, modulus(sigma_tilde));
}

Objective Objective::build(ObjectiveKind kind, const HermitianMatrix& sigma_tilde,
                           const HermitianMatrix& psi_source) {
  if (psi_source.size() != sigma_tilde.size()) {
    throw InvalidArgument("objective: psi_source has the wrong size");
  }
  return Objective(kind, sigma_tilde, modulus(psi_source));
}

const HermitianMatrix& Objective::kernel() const {
  if (!kernel_) {
    throw InvalidArgument("objective: WLS has no quadratic-form kernel");
  }
  return *kernel_;
}

void Objective::check_dimension(const TorusVector& w) const {
  if (w.size() != dimension()) {
    throw InvalidArgument("objective: dimension mismatch");
  }
}

double Objective::value(const TorusVector& w) const {
  check_dimension(w);
  if (kernel_) {
    return std::real(w.entries().dot(kernel_->matrix() * w.entries()));
  }
  const CVector& v = w.entries();
  // Psi o w w^H = D Psi D^H with D = diag(w)
  const CMatrix model = v.asDiagonal() * psi_.cast<Complex>() * v.conjugate().asDiagonal();
  const CMatrix residual =
      CMatrix::Identity(dimension(), dimension()) - sigma_inv_sqrt_ * model * sigma_inv_sqrt_;
  return residual.squaredNorm();
}

CVector Objective::euclidean_gradient(const TorusVector& w) const {
  check_dimension(w);
  if (kernel_) {
    return 2.0 * (kernel_->matrix() * w.entries());
  }
  // With S = sigma^{-1}, D = diag(w) and B = S D Psi:
  //   f = p - 2 tr(S D Psi D^H) + tr((S D Psi D^H)^2)
  //   grad = 4 diag(B D^H B - B)
  const CVector& v = w.entries();
  const CMatrix b = sigma_inv_ * v.asDiagonal() * psi_.cast<Complex>();
  const CMatrix bdb = b * v.conjugate().asDiagonal() * b;
  return 4.0 * (bdb - b).diagonal();
}

}  // namespace cofipl::objectives

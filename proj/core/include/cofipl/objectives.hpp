#pragma once

#include "cofipl/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace cofipl::objectives {

/// Fitting distance between the plug-in and the phase-structured model
/// Psi o w w^H.
enum class ObjectiveKind { KL, LS, WLS };

std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

/// Below this reciprocal condition number, modulus(sigma_tilde) is treated as
/// singular by the KL kernel.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// M = modulus(sigma_tilde)^{-1} o sigma_tilde.
HermitianMatrix kl_kernel(const HermitianMatrix& sigma_tilde);
/// Same with the modulus taken from a separate matrix.
HermitianMatrix kl_kernel(const HermitianMatrix& sigma_tilde, const RMatrix& psi);

/// M = -(modulus(sigma_tilde) o sigma_tilde).
HermitianMatrix ls_kernel(const HermitianMatrix& sigma_tilde);
HermitianMatrix ls_kernel(const HermitianMatrix& sigma_tilde, const RMatrix& psi);

/// Immutable objective bound to a regularized plug-in.
///
/// KL and LS are quadratic forms f(w) = w^H M w with M from kl_kernel or
/// ls_kernel. The LS form equals half the squared Frobenius distance
/// ||sigma_tilde - Psi o w w^H||^2 up to an additive constant.
///
/// WLS is f(w) = ||I - S^{-1/2} (Psi o w w^H) S^{-1/2}||_F^2 with S the
/// (positive definite) plug-in.
///
/// Gradients follow the real inner product <a, b> = Re{a^H b}, i.e.
/// f(w + t xi) = f(w) + t Re{grad^H xi} + O(t^2).
class Objective {
 public:
  static Objective build(ObjectiveKind kind, const HermitianMatrix& sigma_tilde);

  /// Mix-and-match variant: Psi is the modulus of `psi_source` instead of the
  /// modulus of `sigma_tilde` (e.g. a differently regularized plug-in).
  static Objective build(ObjectiveKind kind, const HermitianMatrix& sigma_tilde,
                         const HermitianMatrix& psi_source);

  ObjectiveKind kind() const noexcept { return kind_; }
  Index dimension() const noexcept { return sigma_.size(); }
  const HermitianMatrix& sigma_tilde() const noexcept { return sigma_; }
  const RMatrix& psi_tilde() const noexcept { return psi_; }

  bool is_quadratic() const noexcept { return kind_ != ObjectiveKind::WLS; }
  /// Quadratic-form kernel; throws InvalidArgument for WLS.
  const HermitianMatrix& kernel() const;

  double value(const TorusVector& w) const;
  CVector euclidean_gradient(const TorusVector& w) const;

 private:
  Objective(ObjectiveKind kind, HermitianMatrix sigma, RMatrix psi);

  void check_dimension(const TorusVector& w) const;

  ObjectiveKind kind_;
  HermitianMatrix sigma_;
  RMatrix psi_;
  std::optional<HermitianMatrix> kernel_;
  // WLS cache
  CMatrix sigma_inv_;
  CMatrix sigma_inv_sqrt_;
};

}  // namespace cofipl::objectives

#pragma once

#include "cofipl/objectives.hpp"
#include "cofipl/solve_report.hpp"
#include "cofipl/types.hpp"

#include <string>
#include <string_view>

namespace cofipl::riemann {

/// Tangent vector of the torus at `base`: Re{direction o conj(base)} = 0.
class TangentVector {
 public:
  static constexpr double kTangencyTolerance = 1e-10;

  /// Validates tangency (relative to max(1, |direction|_inf)).
  TangentVector(TorusVector base, CVector direction);

  /// Orthogonal projection of an ambient vector onto the tangent space.
  static TangentVector project(const TorusVector& base, const CVector& ambient);
  static TangentVector zero(const TorusVector& base);

  const TorusVector& base() const noexcept { return base_; }
  const CVector& direction() const noexcept { return direction_; }

  double norm() const { return direction_.norm(); }
  TangentVector scaled(double alpha) const;

 private:
  struct Unchecked {};
  TangentVector(TorusVector base, CVector direction, Unchecked)
      : base_(std::move(base)), direction_(std::move(direction)) {}

  TorusVector base_;
  CVector direction_;
};

/// Metric <xi, eta>_w = Re{xi^H eta}.
double inner(const TangentVector& xi, const TangentVector& eta);

/// grad f = nabla f - Re{conj(nabla f) o w} o w
TangentVector riemannian_gradient(const objectives::Objective& objective, const TorusVector& w);

/// xi - Re{xi o conj(to)} o to, the projection of xi onto T_to.
TangentVector transport(const TorusVector& from, const TorusVector& to, const TangentVector& xi);

/// phase_extract(w + xi). Sets *zero_entry when w + xi had an exact zero.
TorusVector retract(const TorusVector& w, const TangentVector& xi, bool* zero_entry = nullptr);

enum class Method { GD, CG };

std::string to_string(Method method);
Method parse_method(std::string_view name);

struct ArmijoConfig {
  double initial_step = 1.0;
  double contraction = 0.5;
  double slope = 1e-4;
  int max_backtracks = 30;
};

/// CG uses the Hestenes-Stiefel coefficient computed with transported
/// quantities and restarts with steepest descent whenever the direction is
/// not a descent direction. `restart_every` > 0 additionally forces a
/// restart every that many iterations (1 makes CG identical to GD).
///
/// The line search starts the first iteration at `armijo.initial_step`;
/// afterwards it starts at twice the previous accepted step when that step
/// needed no backtracking, and at the previous accepted step otherwise.
struct RiemannConfig {
  Method method = Method::CG;
  int max_iter = 1000;
  double grad_tol = 1e-7;
  ArmijoConfig armijo;
  int restart_every = 0;

  void validate() const;
};

SolveReport riemann_solve(const objectives::Objective& objective, const RiemannConfig& cfg,
                          const TorusVector& w0);
SolveReport riemann_solve(const objectives::Objective& objective, const RiemannConfig& cfg = {});

}  // namespace cofipl::riemann

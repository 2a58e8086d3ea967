#include "cofipl/riemann.hpp"

#include "cofipl/ops.hpp"

#include <algorithm>
#include <cmath>

namespace cofipl::riemann {

namespace {

// Directions whose cosine with -grad falls below this trigger a restart.
constexpr double kMinDescentCosine = 1e-6;
constexpr double kMaxStep = 1e8;

/// Re{v o conj(w)} o w, the normal component of v at w.
CVector normal_component(const CVector& v, const CVector& w) {
  return (v.array() * w.array().conjugate()).real().cast<Complex>() * w.array();
}

}  // namespace

TangentVector::TangentVector(TorusVector base, CVector direction)
    : base_(std::move(base)), direction_(std::move(direction)) {
  if (direction_.size() != base_.size()) {
    throw InvalidArgument("TangentVector: dimension mismatch");
  }
  const double scale = std::max(1.0, direction_.cwiseAbs().maxCoeff());
  const auto radial = (direction_.array() * base_.entries().array().conjugate()).real();
  if (radial.abs().maxCoeff() > kTangencyTolerance * scale) {
    throw InvalidArgument("TangentVector: direction is not tangent to the torus");
  }
}

TangentVector TangentVector::project(const TorusVector& base, const CVector& ambient) {
  if (ambient.size() != base.size()) {
    throw InvalidArgument("TangentVector: dimension mismatch");
  }
  CVector d = ambient - normal_component(ambient, base.entries());
  return TangentVector(base, std::move(d), Unchecked{});
}

TangentVector TangentVector::zero(const TorusVector& base) {
  return TangentVector(base, CVector::Zero(base.size()), Unchecked{});
}

TangentVector TangentVector::scaled(double alpha) const {
  return TangentVector(base_, alpha * direction_, Unchecked{});
}

double inner(const TangentVector& xi, const TangentVector& eta) {
  return std::real(xi.direction().dot(eta.direction()));
}

TangentVector riemannian_gradient(const objectives::Objective& objective, const TorusVector& w) {
  return TangentVector::project(w, objective.euclidean_gradient(w));
}

TangentVector transport(const TorusVector& from, const TorusVector& to, const TangentVector& xi) {
  if (from.size() != to.size() || xi.base().size() != from.size()) {
    throw InvalidArgument("transport: dimension mismatch");
  }
  return TangentVector::project(to, xi.direction());
}

TorusVector retract(const TorusVector& w, const TangentVector& xi, bool* zero_entry) {
  const CVector moved = w.entries() + xi.direction();
  if (zero_entry != nullptr) {
    *zero_entry = has_zero_entry(moved);
  }
  return TorusVector::project(moved);
}

std::string to_string(Method method) {
  return method == Method::GD ? "gd" : "cg";
}

Method parse_method(std::string_view name) {
  if (name == "gd") return Method::GD;
  if (name == "cg") return Method::CG;
  throw InvalidArgument("unknown Riemannian method '" + std::string(name) + "'");
}

void RiemannConfig::validate() const {
  if (max_iter < 1) throw InvalidArgument("riemann: max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw InvalidArgument("riemann: grad_tol must be > 0");
  if (!(armijo.initial_step > 0.0)) {
    throw InvalidArgument("riemann: armijo initial_step must be > 0");
  }
  if (!(armijo.contraction > 0.0 && armijo.contraction < 1.0)) {
    throw InvalidArgument("riemann: armijo contraction must lie in (0, 1)");
  }
  if (!(armijo.slope > 0.0 && armijo.slope < 1.0)) {
    throw InvalidArgument("riemann: armijo slope must lie in (0, 1)");
  }
  if (armijo.max_backtracks < 0) {
    throw InvalidArgument("riemann: armijo max_backtracks must be >= 0");
  }
  if (restart_every < 0) throw InvalidArgument("riemann: restart_every must be >= 0");
}

SolveReport riemann_solve(const objectives::Objective& objective, const RiemannConfig& cfg) {
  return riemann_solve(objective, cfg, TorusVector::ones(objective.dimension()));
}

SolveReport riemann_solve(const objectives::Objective& objective, const RiemannConfig& cfg,
                          const TorusVector& w0) {
  cfg.validate();
  if (w0.size() != objective.dimension()) {
    throw InvalidArgument("riemann_solve: starting point has the wrong dimension");
  }

  SolveReport report{w0, 0, {}, false, false};
  TorusVector w = w0;
  double f = objective.value(w);
  report.objective_trace.push_back(f);

  TangentVector grad = riemannian_gradient(objective, w);
  TangentVector direction = grad.scaled(-1.0);
  double step_guess = cfg.armijo.initial_step;
  int since_restart = 0;

  for (int it = 0; it < cfg.max_iter; ++it) {
    if (grad.norm() < cfg.grad_tol) {
      report.converged = true;
      break;
    }
    double slope = inner(grad, direction);
    // Restart when the direction is not a descent direction or is nearly
    // orthogonal to the gradient.
    if (!(slope < -kMinDescentCosine * grad.norm() * direction.norm())) {
      direction = grad.scaled(-1.0);
      slope = -grad.norm() * grad.norm();
      since_restart = 0;
    }

    // Armijo backtracking on f(R_w(alpha * direction)).
    TorusVector candidate = w;
    double f_candidate = f;
    bool zero = false;
    double alpha = 0.0;
    auto line_search = [&](double start, int& backtracks) {
      alpha = start;
      for (backtracks = 0; backtracks <= cfg.armijo.max_backtracks; ++backtracks) {
        candidate = retract(w, direction.scaled(alpha), &zero);
        f_candidate = objective.value(candidate);
        if (f_candidate < f && f_candidate <= f + cfg.armijo.slope * alpha * slope) {
          return true;
        }
        alpha *= cfg.armijo.contraction;
      }
      return false;
    };
    int backtracks = 0;
    bool accepted = line_search(step_guess, backtracks);
    if (!accepted && (since_restart > 0 || step_guess != cfg.armijo.initial_step)) {
      // Second chance: steepest descent from the configured initial step.
      direction = grad.scaled(-1.0);
      slope = -grad.norm() * grad.norm();
      since_restart = 0;
      accepted = line_search(cfg.armijo.initial_step, backtracks);
    }
    if (!accepted) {
      break;  // best iterate is the current one
    }
    report.zero_entry = report.zero_entry || zero;
    step_guess = backtracks == 0 ? 2.0 * alpha : alpha;
    step_guess = std::min(step_guess, kMaxStep);

    const TorusVector previous = w;
    w = candidate;
    f = f_candidate;
    report.objective_trace.push_back(f);
    report.iterations = it + 1;

    TangentVector next_grad = riemannian_gradient(objective, w);
    ++since_restart;
    const bool forced_restart = cfg.restart_every > 0 && since_restart >= cfg.restart_every;
    if (cfg.method == Method::GD || forced_restart) {
      direction = next_grad.scaled(-1.0);
      since_restart = 0;
    } else {
      const TangentVector moved_grad = transport(previous, w, grad);
      const TangentVector moved_dir = transport(previous, w, direction);
      const CVector diff = next_grad.direction() - moved_grad.direction();
      const TangentVector y = TangentVector::project(w, diff);
      const double denom = inner(moved_dir, y);
      double beta = 0.0;
      if (denom != 0.0 && std::isfinite(denom)) {
        beta = inner(next_grad, y) / denom;
      }
      if (!std::isfinite(beta)) beta = 0.0;
      direction = TangentVector::project(
          w, -next_grad.direction() + beta * moved_dir.direction());
    }
    grad = std::move(next_grad);
  }
  if (!report.converged && grad.norm() < cfg.grad_tol) {
    report.converged = true;
  }
  report.w = reference_first(w);
  return report;
}

}  // namespace cofipl::riemann

#include "cofipl/mm.hpp"

#include "cofipl/ops.hpp"
#include "cofipl/spectral.hpp"

#include <cmath>
#include <limits>

namespace cofipl::mm {

std::string to_string(Init init) {
  switch (init) {
    case Init::Ones: return "ones";
    case Init::LeadingColumnPhases: return "leading-column";
  }
  return "unknown";
}

std::string to_string(Safeguard safeguard) {
  switch (safeguard) {
    case Safeguard::EigShift: return "eig-shift";
    case Safeguard::PosNegSplit: return "pos-neg-split";
    case Safeguard::None: return "none";
  }
  return "unknown";
}

Init parse_init(std::string_view name) {
  if (name == "ones") return Init::Ones;
  if (name == "leading-column") return Init::LeadingColumnPhases;
  throw InvalidArgument("unknown MM init '" + std::string(name) + "'");
}

Safeguard parse_safeguard(std::string_view name) {
  if (name == "eig-shift") return Safeguard::EigShift;
  if (name == "pos-neg-split") return Safeguard::PosNegSplit;
  if (name == "none") return Safeguard::None;
  throw InvalidArgument("unknown MM safeguard '" + std::string(name) + "'");
}

void MmConfig::validate() const {
  if (max_iter < 1) {
    throw InvalidArgument("mm: max_iter must be >= 1");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("mm: tol must be > 0");
  }
}

namespace {

constexpr double kDefinitenessTolerance = 1e-10;

Curvature classify(const spectral::Extremes& ext) {
  const double tol = kDefinitenessTolerance * ext.spectral_radius();
  if (ext.min >= -tol) return Curvature::Convex;
  if (ext.max <= tol) return Curvature::Concave;
  return Curvature::Indefinite;
}

double quadratic(const CMatrix& m, const CVector& w) {
  return std::real(w.dot(m * w));
}

}  // namespace

Curvature classify(const HermitianMatrix& m) {
  return classify(spectral::extreme_eigenvalues(m));
}

MmUpdate mm_update(const HermitianMatrix& m, Safeguard safeguard) {
  const Index p = m.size();
  const spectral::Extremes ext = spectral::extreme_eigenvalues(m);
  const Curvature curvature = classify(ext);
  const CMatrix identity = CMatrix::Identity(p, p);
  switch (curvature) {
    case Curvature::Convex:
      return {curvature, ext.max * identity - m.matrix()};
    case Curvature::Concave:
      return {curvature, -m.matrix()};
    case Curvature::Indefinite:
      break;
  }
  switch (safeguard) {
    case Safeguard::EigShift:
      return {curvature, ext.max * identity - m.matrix()};
    case Safeguard::PosNegSplit: {
      const spectral::Decomposition e = spectral::eigh(m);
      const CMatrix pos = spectral::apply_function(e, [](double x) { return x > 0.0 ? x : 0.0; });
      const CMatrix neg = spectral::apply_function(e, [](double x) { return x < 0.0 ? x : 0.0; });
      const double pos_max = std::max(e.values.maxCoeff(), 0.0);
      return {curvature, (pos_max * identity - pos) - neg};
    }
    case Safeguard::None:
      break;
  }
  throw NumericalError("mm_solve: kernel is indefinite and no safeguard is enabled");
}

TorusVector initial_point(const MmUpdate& update, Init init) {
  const Index p = update.operator_matrix.rows();
  switch (init) {
    case Init::Ones:
      return TorusVector::ones(p);
    case Init::LeadingColumnPhases:
      return TorusVector::project(update.operator_matrix.col(0));
  }
  return TorusVector::ones(p);
}

SolveReport mm_solve(const HermitianMatrix& m, const MmConfig& cfg) {
  cfg.validate();
  const MmUpdate update = mm_update(m, cfg.safeguard);
  return mm_solve(m, cfg, initial_point(update, cfg.init));
}

namespace {
constexpr double kStationaryStep = 1e-12;
}  // namespace

SolveReport mm_solve(const HermitianMatrix& m, const MmConfig& cfg, const TorusVector& w0) {
  cfg.validate();
  if (w0.size() != m.size()) {
    throw InvalidArgument("mm_solve: starting point has the wrong dimension");
  }
  const MmUpdate update = mm_update(m, cfg.safeguard);
  const CMatrix& a = update.operator_matrix;

  CVector w = w0.entries();
  SolveReport report{w0, 0, {}, false, false};
  report.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);
  double f = quadratic(m.matrix(), w);
  report.objective_trace.push_back(f);

  for (int it = 0; it < cfg.max_iter; ++it) {
    const CVector target = a * w;
    if (has_zero_entry(target)) {
      report.zero_entry = true;
    }
    CVector moved = phase_extract(target);
    const double step = (moved - w).cwiseAbs().maxCoeff();
    w = std::move(moved);
    const double next = quadratic(m.matrix(), w);
    report.objective_trace.push_back(next);
    report.iterations = it + 1;
    const double scale = std::max(std::abs(f), std::numeric_limits<double>::min());
    // Near the optimum f is flat to second order, so an unchanged value in
    // floating point does not mean the iterate has settled.
    const bool done = std::abs(next - f) <= cfg.tol * scale && (next != f || step <= kStationaryStep);
    f = next;
    if (done) {
      report.converged = true;
      break;
    }
  }
  report.w = reference_first(TorusVector::project(w));
  return report;
}

EmiResult emi_relax(const HermitianMatrix& m) {
  const spectral::Decomposition e = spectral::eigh(m);
  const Index p = m.size();
  const double radius = e.values.cwiseAbs().maxCoeff();
  if (p > 1 && e.values[1] - e.values[0] <= kDefinitenessTolerance * radius) {
    throw NumericalError("emi_relax: lowest eigenvalue is not simple");
  }
  // Fix the arbitrary unit phase of the eigenvector: largest entry real positive.
  CVector v = e.vectors.col(0);
  Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  v *= std::conj(phase_extract(v[big]));
  const bool zero = has_zero_entry(v);
  return {reference_first(TorusVector::project(v)), e.values[0], v, zero};
}

}  // namespace cofipl::mm

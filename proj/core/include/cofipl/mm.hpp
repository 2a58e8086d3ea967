#pragma once

#include "cofipl/solve_report.hpp"
#include "cofipl/types.hpp"

#include <string>
#include <string_view>

namespace cofipl::mm {

enum class Init { Ones, LeadingColumnPhases };
enum class Safeguard { EigShift, PosNegSplit, None };

std::string to_string(Init init);
std::string to_string(Safeguard safeguard);
Init parse_init(std::string_view name);
Safeguard parse_safeguard(std::string_view name);

struct MmConfig {
  int max_iter = 500;
  /// Relative objective change. A step that leaves f bit-identical only
  /// counts as converged once w moves by at most 1e-12.
  double tol = 1e-9;
  Init init = Init::Ones;
  Safeguard safeguard = Safeguard::EigShift;

  void validate() const;
};

enum class Curvature { Convex, Concave, Indefinite };

/// Sign class of a Hermitian kernel. An eigenvalue within
/// 1e-10 * spectral radius of zero counts as zero.
Curvature classify(const HermitianMatrix& m);

/// The update w_{t+1} = phase_extract(A w_t) for minimizing w^H M w on the
/// torus, as chosen by mm_solve from the curvature and safeguard.
struct MmUpdate {
  Curvature curvature;
  CMatrix operator_matrix;  ///< A
};

/// Convex:     A = lambda_max I - M    (linear majorizer of the shifted form)
/// Concave:    A = -M                  (tangent-plane majorizer)
/// Indefinite: EigShift as the convex case; PosNegSplit majorizes
///             M = M+ + M- part by part, A = (lambda_max(M+) I - M+) - M-.
/// Throws NumericalError for an indefinite kernel with Safeguard::None.
MmUpdate mm_update(const HermitianMatrix& m, Safeguard safeguard);

/// Ones, or phase_extract of the first column of the update operator A
/// (for LS this is the naive interferogram guess).
TorusVector initial_point(const MmUpdate& update, Init init);

/// Majorization-minimization for minimize w^H M w over the torus.
SolveReport mm_solve(const HermitianMatrix& m, const MmConfig& cfg = {});
SolveReport mm_solve(const HermitianMatrix& m, const MmConfig& cfg, const TorusVector& w0);

/// Unit-sphere relaxation: eigenvector of the lowest eigenvalue of M mapped
/// to the torus and referenced.
struct EmiResult {
  TorusVector w;
  double eigenvalue;
  CVector eigenvector;  ///< unit norm, largest-modulus entry real positive
  bool zero_entry;      ///< eigenvector had exact zeros (mapped to 1)
};

/// Throws NumericalError when the lowest eigenvalue is repeated within
/// 1e-10 * spectral radius (the relaxation is then ambiguous).
EmiResult emi_relax(const HermitianMatrix& m);

}  // namespace cofipl::mm

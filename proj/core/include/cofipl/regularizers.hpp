#pragma once

#include "cofipl/types.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cofipl::regularizers {

/// beta * S + (1 - beta) * tr(S)/p * I
struct Shrinkage {
  double beta;
};
/// Projection onto rank-k plus scaled identity.
struct LowRank {
  int k;
};
/// Banding template: entries with |q - l| > bandwidth are zeroed.
struct Taper {
  int bandwidth;
};

using Step = std::variant<Shrinkage, LowRank, Taper>;

/// Regularization steps, applied left to right.
struct RegularizerSpec {
  std::vector<Step> steps;

  /// Checks parameter ranges; pass p > 0 to also check k <= p.
  void validate(Index p = 0) const;
  bool empty() const noexcept { return steps.empty(); }
};

/// Text form: comma-separated "taper:9", "shrinkage:0.1", "lowrank:1", or
/// "none" for the empty spec.
RegularizerSpec parse_regularizer(std::string_view text);
std::string to_string(const RegularizerSpec& spec);

HermitianMatrix shrink_identity(const HermitianMatrix& sigma, double beta);

/// Keep the k leading eigenpairs and replace the remaining p - k eigenvalues
/// by their mean. k == p returns the input. Throws NumericalError when an
/// eigenvalue is below -1e-8 * trace (input not PSD).
HermitianMatrix lowrank_project(const HermitianMatrix& sigma, int k);

/// Rank-k truncation (trailing eigenvalues set to zero).
HermitianMatrix lowrank_truncate(const HermitianMatrix& sigma, int k);

HermitianMatrix taper(const HermitianMatrix& sigma, int bandwidth);

HermitianMatrix apply(const RegularizerSpec& spec, const HermitianMatrix& sigma);

}  // namespace cofipl::regularizers

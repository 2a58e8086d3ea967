#pragma once

#include "cofipl/types.hpp"

#include <cstdint>
#include <string>

namespace cofipl {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// e^{i arg z}, with the convention phase_extract(0) = 1.
Complex phase_extract(Complex z);
CVector phase_extract(const CVector& v);
CMatrix phase_extract(const CMatrix& m);

/// True when any entry is exactly zero (the entries phase_extract maps to 1).
bool has_zero_entry(const CVector& v);

/// Entrywise modulus.
RMatrix modulus(const CMatrix& m);
RMatrix modulus(const HermitianMatrix& m);

/// w * conj(w[0]), renormalized, so that the first entry is exactly 1.
TorusVector reference_first(const TorusVector& w);

/// Largest |wrap(arg M_ql + arg M_lj + arg M_jq)| over all triplets.
/// Throws NumericalError if a tested off-diagonal entry is zero and
/// InvalidArgument for p < 3.
double phase_closure_residual(const HermitianMatrix& m);

/// Binary angle: one full turn maps to 2^32, so differences and sums of
/// angles wrap exactly in 32-bit unsigned arithmetic. The representable range
/// is [-pi, pi); -2^31 is read back as +pi.
std::int32_t to_binary_angle(double angle);
double from_binary_angle(std::int32_t bam);

/// Shortest decimal text that parses back to exactly v.
std::string format_double(double v);

}  // namespace cofipl

#include "cofipl/ops.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace cofipl {

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, two_pi);
  if (r <= -std::numbers::pi) {
    r += two_pi;
  }
  return r;
}

Complex phase_extract(Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) {
    return {1.0, 0.0};
  }
  return z / r;
}

CVector phase_extract(const CVector& v) {
  return v.unaryExpr([](Complex z) { return phase_extract(z); });
}

CMatrix phase_extract(const CMatrix& m) {
  return m.unaryExpr([](Complex z) { return phase_extract(z); });
}

bool has_zero_entry(const CVector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] == Complex(0.0, 0.0)) {
      return true;
    }
  }
  return false;
}

RMatrix modulus(const CMatrix& m) { return m.cwiseAbs(); }

RMatrix modulus(const HermitianMatrix& m) {
  RMatrix r = m.matrix().cwiseAbs();
  // |z| == |conj z| in exact arithmetic; keep the output exactly symmetric.
  return 0.5 * (r + r.transpose());
}

TorusVector reference_first(const TorusVector& w) {
  const Complex ref = std::conj(w[0]);
  if (ref == Complex(1.0, 0.0)) {
    return w;
  }
  CVector out = w.entries() * ref;
  out = phase_extract(out);
  out[0] = 1.0;
  return TorusVector::project(out);
}

double phase_closure_residual(const HermitianMatrix& m) {
  const Index p = m.size();
  if (p < 3) {
    throw InvalidArgument("phase_closure_residual: requires p >= 3");
  }
  RMatrix angle(p, p);
  for (Index q = 0; q < p; ++q) {
    for (Index l = 0; l < p; ++l) {
      if (q != l && m(q, l) == Complex(0.0, 0.0)) {
        throw NumericalError("phase_closure_residual: zero entry at (" +
                             std::to_string(q) + ", " + std::to_string(l) +
                             ")");
      }
      angle(q, l) = std::arg(m(q, l));
    }
  }
  double worst = 0.0;
  for (Index q = 0; q < p; ++q) {
    for (Index l = q + 1; l < p; ++l) {
      for (Index j = l + 1; j < p; ++j) {
        const double r =
            std::abs(wrap_angle(angle(q, l) + angle(l, j) + angle(j, q)));
        worst = std::max(worst, r);
      }
    }
  }
  return worst;
}

std::int32_t to_binary_angle(double angle) {
  constexpr double turn = 4294967296.0;  // 2^32
  const double turns = wrap_angle(angle) / (2.0 * std::numbers::pi);
  const double scaled = std::nearbyint(turns * turn);
  // scaled lies in (-2^31, 2^31]; reduce modulo 2^32 into uint32.
  const auto as_unsigned = static_cast<std::uint32_t>(
      static_cast<std::int64_t>(scaled) & 0xFFFFFFFFLL);
  return static_cast<std::int32_t>(as_unsigned);
}

double from_binary_angle(std::int32_t bam) {
  if (bam == std::numeric_limits<std::int32_t>::min()) {
    return std::numbers::pi;
  }
  return static_cast<double>(bam) * (std::numbers::pi / 2147483648.0);
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace cofipl

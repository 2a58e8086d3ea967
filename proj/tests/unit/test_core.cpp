#include "cofipl/ops.hpp"
#include "cofipl/types.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace cofipl;
using std::numbers::pi;

namespace {

double closure_oracle(const CMatrix& m) {
  const Index p = m.rows();
  double worst = 0.0;
  for (Index q = 0; q < p; ++q)
    for (Index l = 0; l < p; ++l)
      for (Index j = 0; j < p; ++j) {
        if (q == l || l == j || q == j) continue;
        const double s = std::arg(m(q, l)) + std::arg(m(l, j)) + std::arg(m(j, q));
        worst = std::max(worst, std::abs(oracle::wrap(s)));
      }
  return worst;
}

}  // namespace

TEST(PhaseExtract, Examples) {
  const Complex a = phase_extract(Complex(3.0, 4.0));
  EXPECT_NEAR(a.real(), 0.6, 1e-15);
  EXPECT_NEAR(a.imag(), 0.8, 1e-15);
  EXPECT_EQ(phase_extract(Complex(1.0, 0.0)), Complex(1.0, 0.0));
  EXPECT_EQ(phase_extract(Complex(0.0, 1.0)), Complex(0.0, 1.0));
  EXPECT_EQ(phase_extract(Complex(0.0, 0.0)), Complex(1.0, 0.0));
}

TEST(PhaseExtract, MatrixReconstructsWithModulus) {
  std::mt19937_64 rng(1);
  const CMatrix m = oracle::random_complex(5, 7, rng);
  const CMatrix phases = phase_extract(m);
  const RMatrix mod = modulus(m);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      EXPECT_NEAR(std::abs(phases(i, j)), 1.0, 1e-15);
      EXPECT_LE(std::abs(phases(i, j) * mod(i, j) - m(i, j)), 1e-12 * std::abs(m(i, j)));
    }
}

TEST(Modulus, Examples) {
  CMatrix m(2, 2);
  m << 1.0, Complex(0, -1), Complex(0, 1), 1.0;
  EXPECT_TRUE(modulus(HermitianMatrix(m)).isApprox(RMatrix::Ones(2, 2)));
  EXPECT_EQ(modulus(HermitianMatrix::identity(4)), RMatrix::Identity(4, 4));
}

TEST(Modulus, MatchesLoopOracleAndIsSymmetric) {
  std::mt19937_64 rng(2);
  const CMatrix h = oracle::random_hermitian(6, rng);
  const RMatrix got = modulus(HermitianMatrix(h));
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) {
      const double expect = std::sqrt(h(i, j).real() * h(i, j).real() + h(i, j).imag() * h(i, j).imag());
      EXPECT_NEAR(got(i, j), expect, 1e-14);
      EXPECT_EQ(got(i, j), got(j, i));
    }
}

TEST(ReferenceFirst, Examples) {
  RVector t(2);
  t << pi / 4, pi / 2;
  const TorusVector r = reference_first(TorusVector::from_phases(t));
  EXPECT_EQ(r[0], Complex(1.0, 0.0));
  EXPECT_NEAR(std::arg(r[1]), pi / 4, 1e-15);

  RVector u(3);
  u << 0.0, 0.7, -2.0;
  const TorusVector w = TorusVector::from_phases(u);
  EXPECT_EQ(reference_first(w).entries(), w.entries());
}

TEST(ReferenceFirst, GlobalShiftAndIdempotence) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector w = oracle::torus_of(oracle::random_phases(7, rng));
    const Complex shift = std::polar(1.0, ua(rng));
    const TorusVector a = reference_first(TorusVector(w));
    const TorusVector b = reference_first(TorusVector::project(shift * w));
    EXPECT_LT((a.entries() - b.entries()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(reference_first(a).entries(), a.entries());
    EXPECT_EQ(a[0], Complex(1.0, 0.0));
  }
}

TEST(PhaseClosure, ExactStructureIsZero) {
  std::mt19937_64 rng(4);
  const RMatrix psi = oracle::exponential_psi(8, 0.8, RVector::Ones(8));
  const CMatrix m = oracle::structured(psi, oracle::torus_of(oracle::random_phases(8, rng)));
  EXPECT_LE(phase_closure_residual(HermitianMatrix(m)), 1e-10);
}

TEST(PhaseClosure, DirectSum) {
  CMatrix m = CMatrix::Ones(3, 3);
  m(0, 1) = std::polar(1.0, 0.1);
  m(1, 2) = std::polar(1.0, 0.2);
  m(2, 0) = 1.0;
  m(1, 0) = std::conj(m(0, 1));
  m(2, 1) = std::conj(m(1, 2));
  m(0, 2) = std::conj(m(2, 0));
  EXPECT_NEAR(phase_closure_residual(HermitianMatrix(m)), 0.3, 1e-14);
}

TEST(PhaseClosure, RandomScmMatchesTripleLoop) {
  std::mt19937_64 rng(5);
  const CMatrix s = oracle::scm(oracle::random_complex(6, 20, rng));
  EXPECT_NEAR(phase_closure_residual(HermitianMatrix(s)), closure_oracle(s), 1e-12);
}

TEST(PhaseClosure, InvariantUnderUnitDiagonalCongruence) {
  std::mt19937_64 rng(6);
  const CMatrix s = oracle::scm(oracle::random_complex(5, 12, rng));
  const CVector d = oracle::torus_of(oracle::random_phases(5, rng));
  const CMatrix t = d.asDiagonal() * s * d.conjugate().asDiagonal();
  EXPECT_NEAR(phase_closure_residual(HermitianMatrix(s)),
              phase_closure_residual(HermitianMatrix::symmetrize(t)), 1e-12);
}

TEST(PhaseClosure, Errors) {
  EXPECT_THROW(phase_closure_residual(HermitianMatrix::identity(2)), InvalidArgument);
  EXPECT_THROW(phase_closure_residual(HermitianMatrix::identity(3)), NumericalError);
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(pi), pi);
  EXPECT_DOUBLE_EQ(wrap_angle(-pi), pi);
  EXPECT_NEAR(wrap_angle(3 * pi), pi, 1e-15);
  EXPECT_NEAR(wrap_angle(0.5 + 4 * pi), 0.5, 1e-14);
  EXPECT_NEAR(wrap_angle(-0.5 - 2 * pi), -0.5, 1e-14);
}

TEST(BinaryAngle, RoundTripAndExactClosure) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    EXPECT_NEAR(oracle::wrap(from_binary_angle(to_binary_angle(a)) - a), 0.0, 2e-9);
  }
  EXPECT_DOUBLE_EQ(from_binary_angle(to_binary_angle(pi)), pi);
  const auto q = static_cast<std::uint32_t>(to_binary_angle(2.9));
  const auto l = static_cast<std::uint32_t>(to_binary_angle(-3.0));
  const auto j = static_cast<std::uint32_t>(to_binary_angle(1.1));
  EXPECT_EQ((q - l) + (l - j) + (j - q), 0u);
}

TEST(TorusVector, Invariants) {
  EXPECT_THROW(TorusVector(CVector::Ones(1)), InvalidArgument);
  CVector bad = CVector::Ones(3);
  bad[1] = 1.0 + 1e-9;
  EXPECT_THROW(TorusVector{bad}, InvalidArgument);
  bad[1] = 1.0 + 1e-13;
  EXPECT_NO_THROW(TorusVector{bad});
  CVector z = CVector::Zero(3);
  z[0] = Complex(0.0, 2.0);
  const TorusVector p = TorusVector::project(z);
  EXPECT_EQ(p[0], Complex(0.0, 1.0));
  EXPECT_EQ(p[1], Complex(1.0, 0.0));
  EXPECT_TRUE(has_zero_entry(z));
}

TEST(HermitianMatrix, Invariants) {
  CMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, 1), 1.0;
  EXPECT_THROW(HermitianMatrix{m}, InvalidArgument);
  EXPECT_THROW(HermitianMatrix{CMatrix::Ones(2, 3)}, InvalidArgument);
  m << Complex(1.0, 1e-12), Complex(0, 1), Complex(0, -1), 1.0;
  const HermitianMatrix h(m);
  EXPECT_EQ(h(0, 0).imag(), 0.0);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_DOUBLE_EQ(h.trace(), 2.0);
  const RVector ev = h.eigenvalues();
  EXPECT_NEAR(ev[0], 0.0, 1e-14);
  EXPECT_NEAR(ev[1], 2.0, 1e-14);
}

TEST(PixelPatch, Shape) {
  EXPECT_THROW(PixelPatch(CMatrix(3, 0)), InvalidArgument);
  const PixelPatch patch(CMatrix::Ones(3, 5));
  EXPECT_EQ(patch.p(), 3);
  EXPECT_EQ(patch.n(), 5);
}

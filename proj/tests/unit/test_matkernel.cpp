// Copyright 2026 The glrt-rmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "glrt/errors.hpp"
#include "glrt/matkernel.hpp"
#include "test_helpers.hpp"

namespace glrt {
namespace {

using testing::random_hpd;
using testing::random_matrix;
using testing::random_unitary;

const Complex kI{0.0, 1.0};

TEST(Gemm, IdentityLeavesMatrixUnchanged) {
  const ComplexMatrix a = random_matrix(2, 3, 1);
  EXPECT_EQ(gemm(ComplexMatrix::Identity(2, 2), a), a);
}

TEST(Gemm, AdjointProductOfRowVector) {
  ComplexMatrix a(1, 2);
  a << 1.0, kI;
  ComplexMatrix expected(2, 2);
  expected << 1.0, kI, -kI, 1.0;
  EXPECT_LE((gemm(a, a, Adjoint::kYes, Adjoint::kNo) - expected).norm(), 1e-15);
}

TEST(Gemm, ZeroAnnihilates) {
  const ComplexMatrix b = random_matrix(4, 3, 2);
  EXPECT_EQ(gemm(ComplexMatrix::Zero(2, 4), b).norm(), 0.0);
}

TEST(Gemm, AdjointFlagsMatchExplicitAdjoints) {
  const ComplexMatrix a = random_matrix(5, 3, 3);
  const ComplexMatrix b = random_matrix(4, 5, 4);
  const ComplexMatrix expected = a.adjoint() * b.adjoint();
  EXPECT_LE((gemm(a, b, Adjoint::kYes, Adjoint::kYes) - expected).norm(), 1e-13);
}

TEST(Gemm, RejectsNonConformingShapes) {
  EXPECT_THROW(gemm(random_matrix(2, 3, 5), random_matrix(2, 3, 6)), DimensionError);
  EXPECT_THROW(gemm(random_matrix(2, 3, 5), random_matrix(3, 2, 6), Adjoint::kYes), DimensionError);
}

TEST(Gemm, IsAssociative) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix a = random_matrix(10, 10, 100 + seed);
    const ComplexMatrix b = random_matrix(10, 10, 200 + seed);
    const ComplexMatrix c = random_matrix(10, 10, 300 + seed);
    const ComplexMatrix left = gemm(gemm(a, b), c);
    const ComplexMatrix right = gemm(a, gemm(b, c));
    EXPECT_LE((left - right).norm(), 1e-10 * left.norm());
  }
}

TEST(HermitianMatrix, SymmetrizesWithinTolerance) {
  ComplexMatrix a = random_matrix(4, 4, 7);
  a = (a + a.adjoint()).eval();
  a(0, 1) += 1e-15;
  const HermitianMatrix h(a);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(HermitianMatrix, RejectsAsymmetricInput) {
  ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  a(0, 2) = 0.1;
  EXPECT_THROW(HermitianMatrix{a}, PreconditionError);
}

TEST(HermitianMatrix, RejectsNonSquareInput) {
  EXPECT_THROW(HermitianMatrix{random_matrix(2, 3, 1)}, DimensionError);
}

TEST(LogdetHpd, IdentityIsZero) {
  EXPECT_EQ(logdet_hpd(HermitianMatrix::identity(5)), 0.0);
}

TEST(LogdetHpd, DiagonalIsSumOfLogs) {
  EXPECT_NEAR(logdet_hpd(HermitianMatrix::diagonal(RealVector{{2.0, 3.0}})), std::log(6.0),
              1e-15);
}

TEST(LogdetHpd, MatchesEigenvalueOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix b = random_matrix(8, 8, seed);
    const HermitianMatrix a(b.adjoint() * b + ComplexMatrix::Identity(8, 8));
    const double oracle = eigvalsh(a).array().log().sum();
    EXPECT_NEAR(logdet_hpd(a), oracle, 1e-10);
  }
}

TEST(LogdetHpd, RejectsIndefiniteInput) {
  EXPECT_THROW(logdet_hpd(HermitianMatrix::diagonal(RealVector{{1.0, -1.0}})),
               NotPositiveDefiniteError);
  EXPECT_THROW(logdet_hpd(HermitianMatrix::diagonal(RealVector{{1.0, 0.0}})),
               NotPositiveDefiniteError);
}

TEST(SolveHpd, IdentityReturnsRightHandSide) {
  const ComplexMatrix b = random_matrix(4, 2, 9);
  EXPECT_LE((solve_hpd(HermitianMatrix::identity(4), b) - b).norm(), 1e-15);
}

TEST(SolveHpd, DiagonalSystem) {
  const ComplexMatrix x =
      solve_hpd(HermitianMatrix::diagonal(RealVector{{2.0, 4.0}}), ComplexMatrix::Ones(2, 1));
  EXPECT_NEAR(x(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(x(1, 0).real(), 0.25, 1e-15);
}

TEST(SolveHpd, ResidualOnRandomSystem) {
  const ComplexMatrix g = random_matrix(20, 20, 11);
  const HermitianMatrix a(g * g.adjoint() + ComplexMatrix::Identity(20, 20));
  const ComplexMatrix b = random_matrix(20, 3, 12);
  const ComplexMatrix x = solve_hpd(a, b);
  EXPECT_LE((a.matrix() * x - b).norm(), 1e-9 * b.norm());
}

TEST(SolveHpd, RecoversSolutionUpToConditionOneMillion) {
  RealVector spectrum(12);
  for (Index i = 0; i < spectrum.size(); ++i) {
    spectrum(i) = std::pow(10.0, 6.0 * static_cast<double>(i) / 11.0);
  }
  const HermitianMatrix a = random_hpd(spectrum, 13);
  const ComplexMatrix x = random_matrix(12, 2, 14);
  EXPECT_LE((solve_hpd(a, a.matrix() * x) - x).norm(), 1e-8 * x.norm());
}

TEST(SolveHpd, RejectsShapeMismatch) {
  EXPECT_THROW(solve_hpd(HermitianMatrix::identity(3), random_matrix(4, 1, 1)), DimensionError);
}

TEST(Eigvalsh, Identity) {
  EXPECT_EQ(eigvalsh(HermitianMatrix::identity(3)), RealVector::Ones(3));
}

TEST(Eigvalsh, TwoByTwo) {
  ComplexMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const RealVector w = eigvalsh(HermitianMatrix(a));
  EXPECT_NEAR(w(0), 1.0, 1e-14);
  EXPECT_NEAR(w(1), 3.0, 1e-14);
}

TEST(Eigvalsh, RecoversSpectrumOfUnitaryConjugate) {
  const RealVector d{{3.5, -1.0, 0.25, 2.0, -7.0, 0.0}};
  const ComplexMatrix u = random_unitary(d.size(), 21);
  const HermitianMatrix a(u * d.cast<Complex>().asDiagonal() * u.adjoint());
  RealVector sorted = d;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_LE((eigvalsh(a) - sorted).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Eigvalsh, SumEqualsTrace) {
  const ComplexMatrix g = random_matrix(15, 15, 22);
  const HermitianMatrix a(g + g.adjoint());
  EXPECT_LE(std::abs(eigvalsh(a).sum() - a.trace()), 1e-9 * std::max(1.0, std::abs(a.trace())));
}

TEST(Eigvalsh, LogdetAgreesWithEigenvaluesOnHpdFamily) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 9);
    const ComplexMatrix g = random_matrix(n, n + 3, 500 + seed);
    const HermitianMatrix a = gram(g, 1.0 / static_cast<double>(n + 3));
    EXPECT_NEAR(logdet_hpd(a), eigvalsh(a).array().log().sum(), 1e-9);
  }
}

}  // namespace
}  // namespace glrt

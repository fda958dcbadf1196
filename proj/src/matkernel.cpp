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

#include "glrt/matkernel.hpp"

#include <cmath>
#include <string>

#include "glrt/errors.hpp"

namespace glrt {
namespace {

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Eigen::LLT<ComplexMatrix> factorize(const HermitianMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("Cholesky factorization failed on a " +
                                   std::to_string(a.dim()) + "x" +
                                   std::to_string(a.dim()) + " Hermitian matrix");
  }
  // LLT only flags non-positive pivots; NaN input slips through.
  if (!llt.matrixLLT().diagonal().allFinite()) {
    throw NotPositiveDefiniteError("Cholesky factor is not finite");
  }
  return llt;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError("Hermitian matrix must be square and non-empty, got " + shape(a));
  }
  const double norm = a.norm();
  const double asym = (a - a.adjoint()).norm();
  if (asym > kAsymmetryTolerance * norm) {
    throw PreconditionError("matrix is not Hermitian: relative asymmetry " +
                            std::to_string(norm > 0 ? asym / norm : asym));
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

ComplexMatrix gemm(const ComplexMatrix& a, const ComplexMatrix& b, Adjoint adjoint_a,
                   Adjoint adjoint_b) {
  const Index inner_a = adjoint_a == Adjoint::kYes ? a.rows() : a.cols();
  const Index inner_b = adjoint_b == Adjoint::kYes ? b.cols() : b.rows();
  if (inner_a != inner_b) {
    throw DimensionError("gemm: inner dimensions do not conform (" + shape(a) + ", " +
                         shape(b) + ")");
  }
  if (adjoint_a == Adjoint::kYes && adjoint_b == Adjoint::kYes) {
    return a.adjoint() * b.adjoint();
  }
  if (adjoint_a == Adjoint::kYes) {
    return a.adjoint() * b;
  }
  if (adjoint_b == Adjoint::kYes) {
    return a * b.adjoint();
  }
  return a * b;
}

HermitianMatrix gram(const ComplexMatrix& a, double scale) {
  ComplexMatrix g = scale * (a * a.adjoint());
  g = 0.5 * (g + g.adjoint()).eval();
  return HermitianMatrix(std::move(g), HermitianMatrix::Trusted{});
}

HermitianMatrix gram_adjoint(const ComplexMatrix& a, double scale) {
  ComplexMatrix g = scale * (a.adjoint() * a);
  g = 0.5 * (g + g.adjoint()).eval();
  return HermitianMatrix(std::move(g), HermitianMatrix::Trusted{});
}

ComplexMatrix cholesky_lower(const HermitianMatrix& a) {
  return factorize(a).matrixL();
}

double logdet_hpd(const HermitianMatrix& a) {
  const auto llt = factorize(a);
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

ComplexMatrix solve_hpd(const HermitianMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.rows()) {
    throw DimensionError("solve_hpd: system is " + std::to_string(a.dim()) +
                         " but right-hand side is " + shape(b));
  }
  return factorize(a).solve(b);
}

RealVector eigvalsh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigenError("Hermitian eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

HermitianEigen eigh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw EigenError("Hermitian eigenvalue iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace glrt

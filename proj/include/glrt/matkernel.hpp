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

#pragma once

// Dense complex Hermitian linear algebra shared by every other module.
//
// ComplexMatrix is a plain Eigen dense matrix. HermitianMatrix is a validated
// wrapper: it can only be built from a matrix that is Hermitian up to
// round-off, and it stores the symmetrized value (A + A*) / 2.

#include <Eigen/Dense>

#include <complex>

namespace glrt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Adjoint : bool { kNo = false, kYes = true };

class HermitianMatrix {
 public:
  // Relative asymmetry ||A - A*||_F / ||A||_F tolerated on construction.
  static constexpr double kAsymmetryTolerance = 1e-12;

  // Throws DimensionError for non-square or empty input and PreconditionError
  // when the asymmetry exceeds kAsymmetryTolerance.
  explicit HermitianMatrix(const ComplexMatrix& a);

  static HermitianMatrix identity(Index dim);
  static HermitianMatrix diagonal(const RealVector& d);

  Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  double trace() const { return m_.diagonal().real().sum(); }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;

  friend HermitianMatrix gram(const ComplexMatrix&, double);
  friend HermitianMatrix gram_adjoint(const ComplexMatrix&, double);
};

// op(A) * op(B) where op is the identity or the conjugate transpose.
ComplexMatrix gemm(const ComplexMatrix& a, const ComplexMatrix& b,
                   Adjoint adjoint_a = Adjoint::kNo,
                   Adjoint adjoint_b = Adjoint::kNo);

// scale * A A*, Hermitian by construction.
HermitianMatrix gram(const ComplexMatrix& a, double scale = 1.0);

// scale * A* A, Hermitian by construction.
HermitianMatrix gram_adjoint(const ComplexMatrix& a, double scale = 1.0);

// Lower Cholesky factor G with G G* = A. Throws NotPositiveDefiniteError.
ComplexMatrix cholesky_lower(const HermitianMatrix& a);

// log det A for Hermitian positive definite A, via Cholesky.
double logdet_hpd(const HermitianMatrix& a);

// Solves A X = B for Hermitian positive definite A, via Cholesky.
ComplexMatrix solve_hpd(const HermitianMatrix& a, const ComplexMatrix& b);

// Eigenvalues of A in ascending order. Throws EigenError if the iteration fails.
RealVector eigvalsh(const HermitianMatrix& a);

// Eigen-decomposition A = U diag(w) U*, w ascending.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};
HermitianEigen eigh(const HermitianMatrix& a);

}  // namespace glrt

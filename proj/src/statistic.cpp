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

#include "glrt/statistic.hpp"

#include <cmath>
#include <string>

#include "glrt/errors.hpp"

namespace glrt {
namespace {

double eigen_clamped(double g) { return g > 0.0 ? g : 0.0; }

// log det(I_L + X* (V1V1*/N)^{-1} X) through the Cholesky factor of V1V1*/N.
double logdet_identity_plus_quadratic(const HermitianMatrix& v1_gram, const ComplexMatrix& x) {
  if (v1_gram.dim() != x.rows()) {
    throw DimensionError("V1 Gram and V2 have inconsistent row counts");
  }
  const ComplexMatrix factor = cholesky_lower(v1_gram);
  const ComplexMatrix whitened = factor.triangularView<Eigen::Lower>().solve(x);
  ComplexMatrix k = ComplexMatrix::Identity(x.cols(), x.cols());
  k.noalias() += whitened.adjoint() * whitened;
  return logdet_hpd(HermitianMatrix(0.5 * (k + k.adjoint())));
}

// Below this pivot the Schur complement formed from the Gram matrix has lost
// too many digits to cancellation, and I_L - T_N is recomputed by projection.
constexpr double kSchurPivotFloor = 1e-4;

// I_L - T_N as the Gram matrix of the whitened training projected onto the
// orthogonal complement of the row space of Y, applied with Householder
// reflections so no cancellation occurs when T_N approaches the identity.
double eta_by_projection(const ComplexMatrix& y, const ComplexMatrix& s_white) {
  const Index m = y.rows();
  const Index n = y.cols();
  const Eigen::HouseholderQR<ComplexMatrix> qr(y.adjoint());
  const RealVector r_diag = qr.matrixQR().diagonal().cwiseAbs();
  if (!(r_diag.minCoeff() > 1e-13 * r_diag.maxCoeff())) {
    throw DegenerateStatisticError("Y Y* / N is singular");
  }
  ComplexMatrix z = s_white.adjoint();
  z.applyOnTheLeft(qr.householderQ().adjoint());
  // The last N - M coordinates span the complement of the row space of Y.
  const HermitianMatrix residual = gram_adjoint(z.bottomRows(n - m), 1.0 / static_cast<double>(n));
  try {
    return -logdet_hpd(residual);
  } catch (const NotPositiveDefiniteError&) {
    throw DegenerateStatisticError("I_L - T_N is not positive definite");
  }
}

}  // namespace

GlrtStatistic eta_direct(const ComplexMatrix& y, const ComplexMatrix& s) {
  const Index m = y.rows();
  const Index n = y.cols();
  const Index l = s.rows();
  if (s.cols() != n) {
    throw DimensionError("Y has " + std::to_string(n) + " samples but S has " +
                         std::to_string(s.cols()));
  }
  if (m < 1 || l < 1 || n <= m + l) {
    throw DimensionError("eta_N needs N > M + L (M=" + std::to_string(m) +
                         ", N=" + std::to_string(n) + ", L=" + std::to_string(l) + ")");
  }
  const double inv_n = 1.0 / static_cast<double>(n);

  ComplexMatrix training_factor;
  try {
    training_factor = cholesky_lower(gram(s, inv_n));
  } catch (const NotPositiveDefiniteError&) {
    throw SingularTrainingError("S S* / N is not invertible");
  }
  const ComplexMatrix s_white = training_factor.triangularView<Eigen::Lower>().solve(s);

  // Fast path: the trailing L x L block of the Cholesky factor of
  // [Y; S~][Y; S~]* / N factors the Schur complement I_L - T_N.
  ComplexMatrix stacked(m + l, n);
  stacked.topRows(m) = y;
  stacked.bottomRows(l) = s_white;
  ComplexMatrix joint = ComplexMatrix::Zero(m + l, m + l);
  joint.selfadjointView<Eigen::Lower>().rankUpdate(stacked, inv_n);
  const Eigen::LLT<ComplexMatrix, Eigen::Lower> llt(joint);
  if (llt.info() == Eigen::Success) {
    const RealVector pivots = llt.matrixLLT().diagonal().real().tail(l);
    if (pivots.allFinite() && pivots.minCoeff() > kSchurPivotFloor) {
      return {-2.0 * pivots.array().log().sum(), GlrtStatistic::Form::kDirect};
    }
  }
  return {eta_by_projection(y, s_white), GlrtStatistic::Form::kDirect};
}

SplitNoise split_v(const ComplexMatrix& v, const TrainingMatrix& training) {
  const ComplexMatrix& s = training.s;
  if (v.cols() != s.cols()) {
    throw DimensionError("V and S must have the same number of samples");
  }
  const Index n = s.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Index l = s.rows();
  if ((gram(s, inv_n).matrix() - ComplexMatrix::Identity(l, l)).norm() > 1e-8) {
    throw PreconditionError("split_v needs orthonormal training, S S* / N = I_L");
  }
  ComplexMatrix v2 = v * s.adjoint() / std::sqrt(static_cast<double>(n));
  ComplexMatrix v1_gram = gram(v, inv_n).matrix() - gram(v2, inv_n).matrix();
  return {std::move(v2), HermitianMatrix(v1_gram), n};
}

GlrtStatistic eta_split_h0(const SplitNoise& split) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(split.samples));
  return {logdet_identity_plus_quadratic(split.v1_gram, split.v2 * scale),
          GlrtStatistic::Form::kSplit};
}

GlrtStatistic eta_split_h1(const Channel& channel, const SplitNoise& split) {
  if (channel.h.rows() != split.v2.rows() || channel.h.cols() != split.v2.cols()) {
    throw DimensionError("channel and V2 must both be M x L");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(split.samples));
  return {logdet_identity_plus_quadratic(split.v1_gram, channel.h + split.v2 * scale),
          GlrtStatistic::Form::kSplit};
}

double kappa1(const Channel& channel, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw DomainError("kappa1 needs sigma2 > 0");
  }
  const RealVector gamma = eigvalsh(gram_adjoint(channel.h));
  double sum = 0.0;
  for (const double value : gamma) {
    // 1 - (1 + g)^{-2} written without cancellation.
    const double g = eigen_clamped(value) / sigma2;
    sum += g * (2.0 + g) / ((1.0 + g) * (1.0 + g));
  }
  return sum;
}

double h1_logdet_term(const Channel& channel, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw DomainError("h1_logdet_term needs sigma2 > 0");
  }
  const RealVector gamma = eigvalsh(gram_adjoint(channel.h));
  double sum = 0.0;
  for (const double value : gamma) {
    sum += std::log1p(eigen_clamped(value) / sigma2);
  }
  return sum;
}

}  // namespace glrt

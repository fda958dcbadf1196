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

#include "glrt/signal.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "glrt/errors.hpp"

namespace glrt {

const char* to_string(Hypothesis h) noexcept { return h == Hypothesis::kH0 ? "H0" : "H1"; }

DetectionProblem::DetectionProblem(Index sensors, Index samples, Index paths, double sigma2)
    : sensors_(sensors), samples_(samples), paths_(paths), sigma2_(sigma2) {
  if (sensors < 1 || paths < 1) {
    throw DimensionError("detection problem needs M >= 1 and L >= 1");
  }
  if (samples <= sensors + paths) {
    throw DimensionError("detection problem needs N > M + L (M=" + std::to_string(sensors) +
                         ", N=" + std::to_string(samples) + ", L=" + std::to_string(paths) +
                         ")");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("noise power sigma2 must be positive and finite");
  }
}

SpatialCovariance::SpatialCovariance(const HermitianMatrix& r)
    : r_(ComplexMatrix(r.matrix() * (static_cast<double>(r.dim()) / r.trace()))),
      factor_(cholesky_lower(r_)) {}

ComplexVector zadoff_chu(Index length, long root) {
  if (length < 1) {
    throw DimensionError("Zadoff-Chu length must be positive");
  }
  ComplexVector z(length);
  if (length == 1) {
    z(0) = 1.0;
    return z;
  }
  if (root < 1 || root >= length || std::gcd(root, static_cast<long>(length)) != 1) {
    throw InvalidRootError("Zadoff-Chu root " + std::to_string(root) +
                           " is not coprime with length " + std::to_string(length) +
                           " in [1, N)");
  }
  // Phase is -pi * k / N with k reduced mod 2N so the argument stays exact.
  const long long two_n = 2LL * length;
  const bool odd = (length % 2) == 1;
  for (Index n = 0; n < length; ++n) {
    const long long nn = n;
    const long long quad = odd ? (nn * (nn + 1)) % two_n : (nn * nn) % two_n;
    const long long k = (quad * (root % two_n)) % two_n;
    const double phase = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(length);
    z(n) = std::polar(1.0, phase);
  }
  return z;
}

TrainingMatrix build_training_matrix(Index length, Index paths, long root) {
  if (paths < 1 || paths > length) {
    throw DimensionError("training matrix needs 1 <= L <= N (L=" + std::to_string(paths) +
                         ", N=" + std::to_string(length) + ")");
  }
  const ComplexVector base = zadoff_chu(length, root);
  TrainingMatrix t;
  t.root = root;
  t.s.resize(paths, length);
  for (Index k = 0; k < paths; ++k) {
    for (Index n = 0; n < length; ++n) {
      t.s(k, n) = base((n - k + length) % length);
    }
  }
  return t;
}

ComplexMatrix sample_complex_gaussian(Index rows, Index cols, double variance, RngStream& rng) {
  ComplexMatrix out(rows, cols);
  // Each part has variance `variance` / 2, so the Rayleigh radius is
  // sqrt(-variance * log u).
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double radius = std::sqrt(-variance * std::log(rng.uniform_open_closed()));
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      out(i, j) = Complex(radius * std::cos(angle), radius * std::sin(angle));
    }
  }
  return out;
}

Channel generate_channel(Index sensors, Index paths, RngStream& rng) {
  if (sensors < 1 || paths < 1) {
    throw DimensionError("channel needs M >= 1 and L >= 1");
  }
  ComplexMatrix h = sample_complex_gaussian(sensors, paths, 1.0 / static_cast<double>(sensors), rng);
  h /= h.norm();
  return Channel{std::move(h)};
}

ComplexMatrix synthesize(Hypothesis hypothesis, const DetectionProblem& problem,
                         const Channel* channel, const TrainingMatrix& training,
                         const SpatialCovariance* rtilde, RngStream& rng) {
  const Index m = problem.sensors();
  const Index n = problem.samples();
  if (training.s.cols() != n) {
    throw DimensionError("training length does not match N");
  }
  if (rtilde != nullptr && rtilde->dim() != m) {
    throw DimensionError("spatial covariance dimension does not match M");
  }
  ComplexMatrix y = sample_complex_gaussian(m, n, problem.sigma2(), rng);
  if (rtilde != nullptr) {
    y = (rtilde->factor().triangularView<Eigen::Lower>() * y).eval();
  }
  if (hypothesis == Hypothesis::kH1) {
    if (channel == nullptr) {
      throw ConfigError("a channel is required to synthesize under H1");
    }
    if (channel->h.rows() != m || channel->h.cols() != training.s.rows()) {
      throw DimensionError("channel must be M x L");
    }
    y.noalias() += channel->h * training.s;
  }
  return y;
}

Whitened whiten(const ComplexMatrix& y, const ComplexMatrix& s, const SpatialCovariance& rtilde) {
  if (y.cols() != s.cols()) {
    throw DimensionError("Y and S must have the same number of samples");
  }
  if (rtilde.dim() != y.rows()) {
    throw DimensionError("spatial covariance dimension does not match Y");
  }
  const double n = static_cast<double>(s.cols());
  const HermitianEigen ge = eigh(gram(s, 1.0 / n));
  const double largest = ge.values.maxCoeff();
  if (!(ge.values.minCoeff() > 1e-10 * largest)) {
    throw SingularTrainingError("S S* / N is singular: training rows are linearly dependent");
  }
  const RealVector inv_sqrt = ge.values.array().rsqrt();
  const ComplexMatrix gram_inv_sqrt =
      ge.vectors * inv_sqrt.cast<Complex>().asDiagonal() * ge.vectors.adjoint();

  Whitened w;
  w.s = gram_inv_sqrt * s;
  w.y = rtilde.factor().triangularView<Eigen::Lower>().solve(y);
  return w;
}

}  // namespace glrt

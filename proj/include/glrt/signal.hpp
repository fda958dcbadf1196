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

// Training sequences, channels, noise and synthetic observations.

#include <optional>

#include "glrt/matkernel.hpp"
#include "glrt/rng.hpp"

namespace glrt {

enum class Hypothesis { kH0, kH1 };

const char* to_string(Hypothesis h) noexcept;

// Sizes and noise level of one detection problem: M sensors, N samples,
// L paths, noise power sigma2. Construction enforces N > M + L.
class DetectionProblem {
 public:
  DetectionProblem(Index sensors, Index samples, Index paths, double sigma2 = 1.0);

  Index sensors() const noexcept { return sensors_; }
  Index samples() const noexcept { return samples_; }
  Index paths() const noexcept { return paths_; }
  double sigma2() const noexcept { return sigma2_; }

  // c_N = M / N.
  double sensor_ratio() const noexcept {
    return static_cast<double>(sensors_) / static_cast<double>(samples_);
  }
  // d_N = L / N.
  double path_ratio() const noexcept {
    return static_cast<double>(paths_) / static_cast<double>(samples_);
  }

 private:
  Index sensors_;
  Index samples_;
  Index paths_;
  double sigma2_;
};

// L x N matrix of cyclic shifts of one Zadoff-Chu sequence, S S* / N = I_L.
struct TrainingMatrix {
  ComplexMatrix s;
  long root = 1;
};

// M x L channel H = (h_0, ..., h_{L-1}).
struct Channel {
  ComplexMatrix h;
};

// Spatial noise shape R~ with (1/M) Tr R~ = 1, stored with its Cholesky factor.
class SpatialCovariance {
 public:
  // Rescales `r` to unit normalized trace. Throws NotPositiveDefiniteError.
  explicit SpatialCovariance(const HermitianMatrix& r);

  const HermitianMatrix& matrix() const noexcept { return r_; }
  // Lower triangular G with G G* = R~.
  const ComplexMatrix& factor() const noexcept { return factor_; }
  Index dim() const noexcept { return r_.dim(); }

 private:
  HermitianMatrix r_;
  ComplexMatrix factor_;
};

// Zadoff-Chu sequence of length N with the given root:
//   exp(-i pi root n (n + 1) / N) for odd N, exp(-i pi root n^2 / N) for even N.
// Requires 1 <= root < N and gcd(root, N) = 1 (any root is accepted for N = 1).
ComplexVector zadoff_chu(Index length, long root);

// Row k is the base sequence cyclically delayed by k samples.
TrainingMatrix build_training_matrix(Index length, Index paths, long root = 1);

// i.i.d. N_C(0, variance) entries via Box-Muller.
ComplexMatrix sample_complex_gaussian(Index rows, Index cols, double variance, RngStream& rng);

// N_C(0, 1/M) draw rescaled to Tr(H H*) = 1.
Channel generate_channel(Index sensors, Index paths, RngStream& rng);

// Y = H S + V under H1, Y = V under H0, with V = sigma G W, G G* = R~, W
// standard. R~ defaults to the identity.
ComplexMatrix synthesize(Hypothesis hypothesis, const DetectionProblem& problem,
                         const Channel* channel, const TrainingMatrix& training,
                         const SpatialCovariance* rtilde, RngStream& rng);

struct Whitened {
  ComplexMatrix y;
  ComplexMatrix s;
};

// Y~ = G^{-1} Y with G the Cholesky factor of R~ and S~ = (S S*/N)^{-1/2} S.
// Throws SingularTrainingError if S S* / N is numerically singular.
Whitened whiten(const ComplexMatrix& y, const ComplexMatrix& s, const SpatialCovariance& rtilde);

}  // namespace glrt

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

// The GLRT statistic eta_N = -log det(I_L - T_N) and the deterministic H1
// functionals that enter its asymptotic distribution.

#include "glrt/matkernel.hpp"
#include "glrt/signal.hpp"

namespace glrt {

struct GlrtStatistic {
  enum class Form { kDirect, kSplit };
  double eta = 0.0;
  Form form = Form::kDirect;
};

// eta from observations Y (M x N) and training S (L x N), any S with full row
// rank and any noise colouring.
//
// I_L - T_N is the Schur complement of Y Y*/N in the Gram matrix of the
// stacked [Y; S~] with S~ the whitened training, so a single Cholesky of that
// Gram matrix yields log det(I_L - T_N). When T_N has eigenvalues close to one
// (high SNR) the Schur block is rebuilt from the training projected off the
// row space of Y with Householder reflections, which avoids the cancellation.
//
// Throws DimensionError unless N > M + L, SingularTrainingError if S S* is
// singular, and DegenerateStatisticError if I_L - T_N is not positive definite.
GlrtStatistic eta_direct(const ComplexMatrix& y, const ComplexMatrix& s);

// Noise split along the training: V2 = V S* / sqrt(N) and
// V1 V1* / N = V V* / N - V2 V2* / N. V1 itself is never formed.
struct SplitNoise {
  ComplexMatrix v2;
  HermitianMatrix v1_gram;
  Index samples;
};

// Requires ||S S*/N - I_L||_F <= 1e-8, otherwise PreconditionError.
SplitNoise split_v(const ComplexMatrix& v, const TrainingMatrix& training);

// eta = log det(I_L + V2*/sqrt(N) (V1 V1*/N)^{-1} V2/sqrt(N)), the H0 form.
// Throws NotPositiveDefiniteError if V1 V1*/N is singular.
GlrtStatistic eta_split_h0(const SplitNoise& split);

// eta = log det(I_L + G_N) with G_N = (H + V2/sqrt(N))* (V1 V1*/N)^{-1} (H + V2/sqrt(N)).
GlrtStatistic eta_split_h1(const Channel& channel, const SplitNoise& split);

// kappa_1 = Tr[I - (I + H*H / sigma2)^{-2}].
double kappa1(const Channel& channel, double sigma2);

// log det(I + H*H / sigma2).
double h1_logdet_term(const Channel& channel, double sigma2);

}  // namespace glrt

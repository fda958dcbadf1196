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

// Closed-form approximations of the distribution of eta_N, plus the
// Marcenko-Pastur quantities they rest on.
//
// Three regimes are provided, each for H0 and H1:
//   (a) classical, M fixed and N -> infinity;
//   (b) M, N -> infinity at the same rate, L fixed;
//   (c) L, M, N -> infinity at the same rate.
// All of them use the finite ratios c_N = M/N and d_N = L/N, and N rather
// than N - L.

#include <utility>
#include <variant>

#include "glrt/signal.hpp"

namespace glrt {

// Real Gaussian N(mean, variance).
struct GaussianApprox {
  double mean = 0.0;
  double variance = 1.0;

  double stddev() const;
  double cdf(double x) const;
  double quantile(double p) const;
};

// eta ~ scale * X / 2 with X chi-squared with `dof` degrees of freedom.
//
// With dof = 2ML and scale = 1/N this is N eta ~ sum of ML unit-mean
// exponentials, which has mean M L and variance M L, i.e. E[eta] = L c_N and
// Var[eta] = L c_N / N.
struct ChiSquaredApprox {
  long dof = 2;
  double scale = 1.0;

  double mean() const { return 0.5 * static_cast<double>(dof) * scale; }
  double variance() const { return 0.5 * static_cast<double>(dof) * scale * scale; }
  double cdf(double x) const;
  double quantile(double p) const;
};

using Approximation = std::variant<GaussianApprox, ChiSquaredApprox>;

enum class Model { kA, kB, kC };

const char* to_string(Model m) noexcept;

double mean(const Approximation& a);
double variance(const Approximation& a);
double cdf(const Approximation& a, double x);
double quantile(const Approximation& a, double p);

// Model (a) under H0: (1/(2N)) chi^2_{2ML}.
ChiSquaredApprox model_a_h0(const DetectionProblem& problem);

// Model (a) under H1: N(log det(I + H*H/sigma2), kappa_1 / N). Throws
// DomainError for H = 0, where the variance vanishes.
GaussianApprox model_a_h1(const DetectionProblem& problem, const Channel& channel);

// Model (b). H0: N(L log(1/(1-c_N)), L c_N / ((1-c_N) N)).
// H1 adds log det(I + H*H/sigma2) to the mean and kappa_1 / N to the variance.
// `channel` must be given iff hypothesis is H1.
GaussianApprox model_b(const DetectionProblem& problem, Hypothesis hypothesis,
                       const Channel* channel = nullptr);

// Model (c). H0: N(eta~_N, delta~_N) from the F-matrix CLT.
// H1 is a heuristic: the H1 corrections of model (b) are added to the H0
// moments, without a supporting limit theorem.
GaussianApprox model_c(const DetectionProblem& problem, Hypothesis hypothesis,
                       const Channel* channel = nullptr);

Approximation approximate(Model model, const DetectionProblem& problem, Hypothesis hypothesis,
                          const Channel* channel = nullptr);

// eta~_N and delta~_N for raw ratios; DomainError unless c, d > 0 and c + d < 1.
double lmn_mean(double c, double d, double samples);
double lmn_variance(double c, double d);

struct MpLaw {
  double c;
  double sigma2 = 1.0;

  // Throws DomainError unless 0 < c < 1 and sigma2 > 0.
  MpLaw(double ratio, double noise_power);
};

std::pair<double, double> mp_edges(const MpLaw& law);
double mp_density(double x, const MpLaw& law);

// Stieltjes transform at zero and its derivative:
// m(0) = 1 / (sigma2 (1 - c)), m'(0) = 1 / (sigma2^2 (1 - c)^3).
std::pair<double, double> mp_inverse_moments(const MpLaw& law);

double gaussian_cdf(double x);
// Phi^{-1}(p); DomainError unless 0 < p < 1.
double gaussian_quantile(double p);

double chi2_cdf(double x, double dof);
double chi2_quantile(double p, double dof);

}  // namespace glrt

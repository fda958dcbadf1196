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

#include "glrt/asymptotics.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <type_traits>
#include <string>

#include "glrt/errors.hpp"
#include "glrt/statistic.hpp"

namespace glrt {
namespace {

void require_probability(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(who) + ": probability must lie in (0, 1), got " +
                      std::to_string(p));
  }
}

void require_channel(Hypothesis hypothesis, const Channel* channel) {
  if ((hypothesis == Hypothesis::kH1) != (channel != nullptr)) {
    throw PreconditionError("a channel must be supplied under H1 and only under H1");
  }
}

// (1 - x) log(1 - x), accurate for small x.
double one_minus_log(double x) { return (1.0 - x) * std::log1p(-x); }

struct H1Terms {
  double mean_shift = 0.0;
  double variance_shift = 0.0;
};

H1Terms h1_terms(const DetectionProblem& problem, const Channel* channel) {
  if (channel == nullptr) {
    return {};
  }
  return {h1_logdet_term(*channel, problem.sigma2()),
          kappa1(*channel, problem.sigma2()) / static_cast<double>(problem.samples())};
}

}  // namespace

double GaussianApprox::stddev() const { return std::sqrt(variance); }

double GaussianApprox::cdf(double x) const { return gaussian_cdf((x - mean) / stddev()); }

double GaussianApprox::quantile(double p) const { return mean + stddev() * gaussian_quantile(p); }

double ChiSquaredApprox::cdf(double x) const {
  if (!(x > 0.0)) {
    return 0.0;
  }
  return chi2_cdf(2.0 * x / scale, static_cast<double>(dof));
}

double ChiSquaredApprox::quantile(double p) const {
  return 0.5 * scale * chi2_quantile(p, static_cast<double>(dof));
}

const char* to_string(Model m) noexcept {
  switch (m) {
    case Model::kA:
      return "a";
    case Model::kB:
      return "b";
    case Model::kC:
      return "c";
  }
  return "?";
}

double mean(const Approximation& a) {
  return std::visit(
      [](const auto& d) {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, GaussianApprox>) {
          return d.mean;
        } else {
          return d.mean();
        }
      },
      a);
}

double variance(const Approximation& a) {
  return std::visit(
      [](const auto& d) {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, GaussianApprox>) {
          return d.variance;
        } else {
          return d.variance();
        }
      },
      a);
}

double cdf(const Approximation& a, double x) {
  return std::visit([x](const auto& d) { return d.cdf(x); }, a);
}

double quantile(const Approximation& a, double p) {
  return std::visit([p](const auto& d) { return d.quantile(p); }, a);
}

ChiSquaredApprox model_a_h0(const DetectionProblem& problem) {
  return {2L * static_cast<long>(problem.sensors()) * static_cast<long>(problem.paths()),
          1.0 / static_cast<double>(problem.samples())};
}

GaussianApprox model_a_h1(const DetectionProblem& problem, const Channel& channel) {
  const H1Terms t = h1_terms(problem, &channel);
  if (!(t.variance_shift > 0.0)) {
    throw DomainError("model (a) under H1 is degenerate for a zero channel");
  }
  return {t.mean_shift, t.variance_shift};
}

GaussianApprox model_b(const DetectionProblem& problem, Hypothesis hypothesis,
                       const Channel* channel) {
  require_channel(hypothesis, channel);
  const double c = problem.sensor_ratio();
  if (!(c < 1.0)) {
    throw DomainError("model (b) needs c_N < 1");
  }
  const double l = static_cast<double>(problem.paths());
  const double n = static_cast<double>(problem.samples());
  const H1Terms t = h1_terms(problem, channel);
  return {-l * std::log1p(-c) + t.mean_shift, l * c / ((1.0 - c) * n) + t.variance_shift};
}

double lmn_mean(double c, double d, double samples) {
  if (!(c > 0.0 && d > 0.0 && c + d < 1.0)) {
    throw DomainError("model (c) needs c_N, d_N > 0 and c_N + d_N < 1");
  }
  return samples * (one_minus_log(c + d) - one_minus_log(c) - one_minus_log(d));
}

double lmn_variance(double c, double d) {
  if (!(c > 0.0 && d > 0.0 && c + d < 1.0)) {
    throw DomainError("model (c) needs c_N, d_N > 0 and c_N + d_N < 1");
  }
  const double ratio = d / (1.0 - d);
  const double spread = c * (1.0 - c) / (d * (1.0 - d));
  const double a = std::pow(1.0 - c / (1.0 - d), 2) + ratio * (1.0 + spread);
  const double b = 2.0 * ratio * std::sqrt(spread);
  if (!(a > b)) {
    throw DomainError("model (c) variance: a_N^2 <= b_N^2");
  }
  // 2r / (a + r) = 1 - b^2 / (a + r)^2 with r = sqrt(a^2 - b^2).
  const double r = std::sqrt((a - b) * (a + b));
  return -std::log1p(-(b * b) / ((a + r) * (a + r)));
}

GaussianApprox model_c(const DetectionProblem& problem, Hypothesis hypothesis,
                       const Channel* channel) {
  require_channel(hypothesis, channel);
  const double c = problem.sensor_ratio();
  const double d = problem.path_ratio();
  const H1Terms t = h1_terms(problem, channel);
  return {lmn_mean(c, d, static_cast<double>(problem.samples())) + t.mean_shift,
          lmn_variance(c, d) + t.variance_shift};
}

Approximation approximate(Model model, const DetectionProblem& problem, Hypothesis hypothesis,
                          const Channel* channel) {
  switch (model) {
    case Model::kA:
      require_channel(hypothesis, channel);
      if (hypothesis == Hypothesis::kH0) {
        return model_a_h0(problem);
      }
      return model_a_h1(problem, *channel);
    case Model::kB:
      return model_b(problem, hypothesis, channel);
    case Model::kC:
      return model_c(problem, hypothesis, channel);
  }
  throw DomainError("unknown model");
}

MpLaw::MpLaw(double ratio, double noise_power) : c(ratio), sigma2(noise_power) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError("Marcenko-Pastur ratio must lie in (0, 1)");
  }
  if (!(noise_power > 0.0)) {
    throw DomainError("Marcenko-Pastur noise power must be positive");
  }
}

std::pair<double, double> mp_edges(const MpLaw& law) {
  const double root = std::sqrt(law.c);
  return {law.sigma2 * (1.0 - root) * (1.0 - root), law.sigma2 * (1.0 + root) * (1.0 + root)};
}

double mp_density(double x, const MpLaw& law) {
  const auto [lo, hi] = mp_edges(law);
  if (!(x > lo && x < hi)) {
    return 0.0;
  }
  return std::sqrt((x - lo) * (hi - x)) / (2.0 * law.sigma2 * law.c * std::numbers::pi * x);
}

std::pair<double, double> mp_inverse_moments(const MpLaw& law) {
  const double gap = 1.0 - law.c;
  return {1.0 / (law.sigma2 * gap), 1.0 / (law.sigma2 * law.sigma2 * gap * gap * gap)};
}

double gaussian_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

double gaussian_quantile(double p) {
  require_probability(p, "gaussian_quantile");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double chi2_cdf(double x, double dof) {
  if (!(dof > 0.0) || !(x >= 0.0)) {
    throw DomainError("chi2_cdf needs dof > 0 and x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double p, double dof) {
  require_probability(p, "chi2_quantile");
  if (!(dof > 0.0)) {
    throw DomainError("chi2_quantile needs dof > 0");
  }
  return 2.0 * boost::math::gamma_p_inv(0.5 * dof, p);
}

}  // namespace glrt

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

// Monte-Carlo trials of eta_N, empirical moments, ROC curves, and the
// random-matrix property checks (Marcenko-Pastur, trace lemma).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "glrt/asymptotics.hpp"
#include "glrt/signal.hpp"

namespace glrt {

// Runs body(i) for every i in [0, count) on up to `threads` workers.
// Exceptions are collected and the one from the smallest index is rethrown,
// so failures are reported identically for any thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct TrialOptions {
  unsigned threads = 1;
  long zc_root = 1;
  // Draw a fresh channel inside every H1 trial instead of using the fixed one.
  bool redraw_channel = false;
  // Noise shape R~; identity when null.
  const SpatialCovariance* rtilde = nullptr;
};

// Immutable set of eta_N samples with their provenance.
class TrialBatch {
 public:
  // Throws PreconditionError if a sample is below -1e-12.
  TrialBatch(std::vector<double> samples, Hypothesis hypothesis, std::uint64_t config_digest,
             std::uint64_t master_seed);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  Hypothesis hypothesis() const noexcept { return hypothesis_; }
  std::uint64_t config_digest() const noexcept { return config_digest_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }

 private:
  std::vector<double> samples_;
  Hypothesis hypothesis_;
  std::uint64_t config_digest_;
  std::uint64_t master_seed_;
};

// Trial i uses RngStream(lane_seed(master_seed, hypothesis), i), so the
// batch is a pure function of its inputs. Under H1 `channel` is fixed across
// trials unless options.redraw_channel is set, in which case it may be null.
// A degenerate trial aborts the batch with DegenerateStatisticError carrying
// the trial index.
TrialBatch run_trials(const DetectionProblem& problem, Hypothesis hypothesis,
                      const Channel* channel, std::size_t trials, std::uint64_t master_seed,
                      const TrialOptions& options = {});

std::uint64_t lane_seed(std::uint64_t master_seed, Hypothesis hypothesis) noexcept;

struct EmpiricalSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
  double se_mean = 0.0;      // sqrt(variance / n)
  double se_variance = 0.0;  // variance * sqrt(2 / (n - 1))
};

// Throws DomainError for fewer than two samples.
EmpiricalSummary summarize(std::span<const double> samples);
EmpiricalSummary summarize(const TrialBatch& batch);

struct ShapeStatistics {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

// Moment-ratio skewness and excess kurtosis (population normalization).
ShapeStatistics shape_statistics(std::span<const double> samples);

// sup_x |F_n(x) - Phi(x)| for the standard normal Phi.
double ks_statistic_normal(std::span<const double> samples);

enum class RocMethod { kEmpirical, kHybrid, kTheoretical };

const char* to_string(RocMethod m) noexcept;

struct RocPoint {
  double pfa = 0.0;
  double pnd = 0.0;
  double threshold = 0.0;
  // Binomial standard error of pnd; zero for theoretical curves.
  double pnd_stderr = 0.0;
  // False when pfa is below the 1/count resolution of the H0 batch.
  bool resolved = true;
};

struct RocCurve {
  std::vector<RocPoint> points;
  RocMethod method = RocMethod::kEmpirical;
};

// Throws DomainError unless the grid is non-empty, strictly increasing and
// inside (0, 1).
void validate_pfa_grid(std::span<const double> pfa_grid);

// Threshold: smallest H0 sample s with #{h0 > s} / n <= pfa. pnd is the
// fraction of H1 samples <= s.
double empirical_threshold(std::span<const double> sorted_h0, double pfa);
RocCurve empirical_roc(std::span<const double> h0, std::span<const double> h1,
                       std::span<const double> pfa_grid);
RocCurve empirical_roc(const TrialBatch& h0, const TrialBatch& h1,
                       std::span<const double> pfa_grid);

// Threshold from the H0 model quantile at 1 - pfa, pnd from the H1 samples.
RocCurve hybrid_roc(const Approximation& h0_model, std::span<const double> h1,
                    std::span<const double> pfa_grid);
RocCurve hybrid_roc(const Approximation& h0_model, const TrialBatch& h1,
                    std::span<const double> pfa_grid);

// Both sides from models: pnd = Phi((s - mean_1) / sd_1).
RocCurve theoretical_roc(const Approximation& h0_model, const GaussianApprox& h1_model,
                         std::span<const double> pfa_grid);

// Empirical mean of a per-draw quantity against its deterministic limit.
struct PropertyCheck {
  std::string name;
  double empirical = 0.0;
  double std_error = 0.0;
  double theory = 0.0;
};

// Sigma = V / sqrt(N), V with i.i.d. N_C(0, sigma2) entries, M x N.
struct MpReport {
  PropertyCheck lambda_min;          // vs sigma2 (1 - sqrt(c))^2
  PropertyCheck lambda_max;          // vs sigma2 (1 + sqrt(c))^2
  PropertyCheck inverse_trace;       // (1/M) Tr (Sigma Sigma*)^{-1} vs m(0)
  PropertyCheck inverse_sq_trace;    // (1/M) Tr (Sigma Sigma*)^{-2} vs m'(0)
  PropertyCheck bilinear_real;       // Re u* (Sigma Sigma*)^{-1} v vs Re u*v m(0)
  PropertyCheck bilinear_imag;       // Im u* (Sigma Sigma*)^{-1} v vs Im u*v m(0)
  std::size_t trials = 0;

  std::vector<PropertyCheck> all() const;
};

MpReport validate_mp_properties(Index sensors, Index samples, double sigma2, std::size_t trials,
                                std::uint64_t seed, unsigned threads = 1);

// omega = Tr[D (Gamma* A Gamma + Gamma* B + B* Gamma)], Gamma M x L with
// i.i.d. N_C(0, sigma2 / N) entries.
struct TraceLemmaReport {
  PropertyCheck mean;      // vs sigma2 Tr(A) Tr(D) / N
  PropertyCheck variance;  // vs zeta / N
  std::size_t trials = 0;
};

// Var(omega) = zeta / N with
// zeta = sigma2^2 Tr(A^2) Tr(D^2) / N + 2 sigma2 Tr(D^2 B* B).
double trace_lemma_variance(const HermitianMatrix& a, const ComplexMatrix& b,
                            const HermitianMatrix& d, double sigma2, Index samples);

TraceLemmaReport validate_trace_lemma(Index sensors, Index samples, Index paths, double sigma2,
                                      const HermitianMatrix& a, const ComplexMatrix& b,
                                      const HermitianMatrix& d, std::size_t trials,
                                      std::uint64_t seed, unsigned threads = 1);

// Shortest round-trip decimal representation; locale independent.
std::string format_double(double value);

// "trial_index,eta" followed by one row per sample.
void write_batch_csv(std::ostream& out, const TrialBatch& batch);

struct SummaryRow {
  std::string quantity;
  double value = 0.0;
  double std_error = 0.0;
};

// "quantity,value,stderr".
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace glrt

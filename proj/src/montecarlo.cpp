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

#include "glrt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "glrt/errors.hpp"
#include "glrt/statistic.hpp"

namespace glrt {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ = (hash_ ^ p[i]) * kFnvPrime;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = kFnvOffset;
};

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Fraction of sorted samples <= threshold.
double fraction_at_or_below(const std::vector<double>& sorted, double threshold) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), threshold);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double binomial_stderr(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

PropertyCheck check_from(std::string name, std::span<const double> draws, double theory) {
  const EmpiricalSummary s = summarize(draws);
  return {std::move(name), s.mean, s.se_mean, theory};
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, count));
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

TrialBatch::TrialBatch(std::vector<double> samples, Hypothesis hypothesis,
                       std::uint64_t config_digest, std::uint64_t master_seed)
    : samples_(std::move(samples)),
      hypothesis_(hypothesis),
      config_digest_(config_digest),
      master_seed_(master_seed) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(samples_[i] >= -1e-12)) {
      throw PreconditionError("eta sample " + std::to_string(i) + " is negative or NaN");
    }
  }
}

std::uint64_t lane_seed(std::uint64_t master_seed, Hypothesis hypothesis) noexcept {
  return hypothesis == Hypothesis::kH0 ? master_seed : mix64(master_seed ^ 0x4831ULL);
}

TrialBatch run_trials(const DetectionProblem& problem, Hypothesis hypothesis,
                      const Channel* channel, std::size_t trials, std::uint64_t master_seed,
                      const TrialOptions& options) {
  if (trials == 0) {
    throw DomainError("run_trials needs at least one trial");
  }
  const bool h1 = hypothesis == Hypothesis::kH1;
  if (h1 && channel == nullptr && !options.redraw_channel) {
    throw ConfigError("H1 trials need a fixed channel or per-trial redraw");
  }
  if (!h1 && channel != nullptr) {
    throw PreconditionError("a channel was supplied for H0 trials");
  }
  const Index m = problem.sensors();
  const Index l = problem.paths();
  const TrainingMatrix training = build_training_matrix(problem.samples(), l, options.zc_root);
  const std::uint64_t lane = lane_seed(master_seed, hypothesis);

  std::vector<double> eta(trials);
  parallel_for(trials, options.threads, [&](std::size_t i) {
    RngStream rng(lane, i);
    Channel drawn;
    const Channel* h = channel;
    if (h1 && options.redraw_channel) {
      drawn = generate_channel(m, l, rng);
      h = &drawn;
    }
    const ComplexMatrix y = synthesize(hypothesis, problem, h, training, options.rtilde, rng);
    try {
      eta[i] = eta_direct(y, training.s).eta;
    } catch (const DegenerateStatisticError& e) {
      throw DegenerateStatisticError(std::string(e.what()) + " (trial " + std::to_string(i) + ")",
                                     static_cast<long>(i));
    }
  });

  Fnv1a digest;
  digest.value(static_cast<std::int64_t>(m));
  digest.value(static_cast<std::int64_t>(problem.samples()));
  digest.value(static_cast<std::int64_t>(l));
  digest.value(problem.sigma2());
  digest.value(static_cast<int>(hypothesis));
  digest.value(static_cast<std::uint64_t>(trials));
  digest.value(options.zc_root);
  digest.value(options.redraw_channel);
  if (channel != nullptr) {
    digest.bytes(channel->h.data(), sizeof(Complex) * static_cast<std::size_t>(channel->h.size()));
  }
  if (options.rtilde != nullptr) {
    const ComplexMatrix& r = options.rtilde->matrix().matrix();
    digest.bytes(r.data(), sizeof(Complex) * static_cast<std::size_t>(r.size()));
  }
  return TrialBatch(std::move(eta), hypothesis, digest.digest(), master_seed);
}

EmpiricalSummary summarize(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw DomainError("summarize needs at least two samples");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += (samples[i] - mean) / static_cast<double>(i + 1);
  }
  double ss = 0.0;
  for (const double x : samples) {
    ss += (x - mean) * (x - mean);
  }
  const double nd = static_cast<double>(n);
  const double var = ss / (nd - 1.0);
  return {mean, var, n, std::sqrt(var / nd), var * std::sqrt(2.0 / (nd - 1.0))};
}

EmpiricalSummary summarize(const TrialBatch& batch) { return summarize(batch.samples()); }

ShapeStatistics shape_statistics(std::span<const double> samples) {
  const EmpiricalSummary s = summarize(samples);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (const double x : samples) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(samples.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double ks_statistic_normal(std::span<const double> samples) {
  if (samples.empty()) {
    throw DomainError("ks_statistic_normal needs samples");
  }
  const std::vector<double> sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = gaussian_cdf(sorted[i]);
    sup = std::max({sup, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return sup;
}

const char* to_string(RocMethod m) noexcept {
  switch (m) {
    case RocMethod::kEmpirical:
      return "empirical";
    case RocMethod::kHybrid:
      return "hybrid";
    case RocMethod::kTheoretical:
      return "theoretical";
  }
  return "?";
}

void validate_pfa_grid(std::span<const double> pfa_grid) {
  if (pfa_grid.empty()) {
    throw DomainError("P_fa grid is empty");
  }
  for (std::size_t i = 0; i < pfa_grid.size(); ++i) {
    if (!(pfa_grid[i] > 0.0 && pfa_grid[i] < 1.0)) {
      throw DomainError("P_fa grid values must lie in (0, 1)");
    }
    if (i > 0 && !(pfa_grid[i] > pfa_grid[i - 1])) {
      throw DomainError("P_fa grid must be strictly increasing");
    }
  }
}

double empirical_threshold(std::span<const double> sorted_h0, double pfa) {
  if (sorted_h0.empty()) {
    throw DomainError("empirical threshold needs H0 samples");
  }
  const double n = static_cast<double>(sorted_h0.size());
  // 1e-9 keeps n (1 - pfa) from rounding up past an exact integer.
  auto k = static_cast<std::size_t>(std::ceil(n * (1.0 - pfa) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted_h0.size());
  return sorted_h0[k - 1];
}

RocCurve empirical_roc(std::span<const double> h0, std::span<const double> h1,
                       std::span<const double> pfa_grid) {
  validate_pfa_grid(pfa_grid);
  if (h0.empty() || h1.empty()) {
    throw DomainError("empirical ROC needs non-empty H0 and H1 batches");
  }
  const std::vector<double> s0 = sorted_copy(h0);
  const std::vector<double> s1 = sorted_copy(h1);
  RocCurve curve;
  curve.method = RocMethod::kEmpirical;
  for (const double pfa : pfa_grid) {
    RocPoint p;
    p.pfa = pfa;
    p.threshold = empirical_threshold(s0, pfa);
    p.pnd = fraction_at_or_below(s1, p.threshold);
    p.pnd_stderr = binomial_stderr(p.pnd, s1.size());
    p.resolved = pfa * static_cast<double>(s0.size()) >= 1.0;
    curve.points.push_back(p);
  }
  return curve;
}

RocCurve empirical_roc(const TrialBatch& h0, const TrialBatch& h1,
                       std::span<const double> pfa_grid) {
  return empirical_roc(h0.samples(), h1.samples(), pfa_grid);
}

RocCurve hybrid_roc(const Approximation& h0_model, std::span<const double> h1,
                    std::span<const double> pfa_grid) {
  validate_pfa_grid(pfa_grid);
  if (h1.empty()) {
    throw DomainError("hybrid ROC needs a non-empty H1 batch");
  }
  const std::vector<double> s1 = sorted_copy(h1);
  RocCurve curve;
  curve.method = RocMethod::kHybrid;
  for (const double pfa : pfa_grid) {
    RocPoint p;
    p.pfa = pfa;
    p.threshold = quantile(h0_model, 1.0 - pfa);
    p.pnd = fraction_at_or_below(s1, p.threshold);
    p.pnd_stderr = binomial_stderr(p.pnd, s1.size());
    curve.points.push_back(p);
  }
  return curve;
}

RocCurve hybrid_roc(const Approximation& h0_model, const TrialBatch& h1,
                    std::span<const double> pfa_grid) {
  return hybrid_roc(h0_model, h1.samples(), pfa_grid);
}

RocCurve theoretical_roc(const Approximation& h0_model, const GaussianApprox& h1_model,
                         std::span<const double> pfa_grid) {
  validate_pfa_grid(pfa_grid);
  RocCurve curve;
  curve.method = RocMethod::kTheoretical;
  for (const double pfa : pfa_grid) {
    RocPoint p;
    p.pfa = pfa;
    p.threshold = quantile(h0_model, 1.0 - pfa);
    p.pnd = h1_model.cdf(p.threshold);
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<PropertyCheck> MpReport::all() const {
  return {lambda_min, lambda_max, inverse_trace, inverse_sq_trace, bilinear_real, bilinear_imag};
}

MpReport validate_mp_properties(Index sensors, Index samples, double sigma2, std::size_t trials,
                                std::uint64_t seed, unsigned threads) {
  if (sensors < 1 || samples <= sensors) {
    throw DimensionError("Marcenko-Pastur check needs N > M >= 1");
  }
  if (trials < 2) {
    throw DomainError("Marcenko-Pastur check needs at least two draws");
  }
  const MpLaw law(static_cast<double>(sensors) / static_cast<double>(samples), sigma2);
  const auto [lo, hi] = mp_edges(law);
  const auto [m0, m0_prime] = mp_inverse_moments(law);

  // Fixed deterministic unit vectors, drawn once from a reserved stream.
  RngStream vector_rng(seed, std::numeric_limits<std::uint64_t>::max());
  ComplexVector u = sample_complex_gaussian(sensors, 1, 1.0, vector_rng);
  ComplexVector v = sample_complex_gaussian(sensors, 1, 1.0, vector_rng);
  u.normalize();
  v.normalize();
  const Complex uv = u.dot(v);

  std::vector<double> lmin(trials), lmax(trials), tr1(trials), tr2(trials), bre(trials),
      bim(trials);
  const double inv_n = 1.0 / static_cast<double>(samples);
  parallel_for(trials, threads, [&](std::size_t t) {
    RngStream rng(seed, t);
    const ComplexMatrix noise = sample_complex_gaussian(sensors, samples, sigma2, rng);
    const HermitianMatrix w = gram(noise, inv_n);
    const RealVector lambda = eigvalsh(w);
    lmin[t] = lambda(0);
    lmax[t] = lambda(lambda.size() - 1);
    tr1[t] = lambda.array().inverse().mean();
    tr2[t] = lambda.array().inverse().square().mean();
    const Complex form = u.dot(solve_hpd(w, v).col(0));
    bre[t] = form.real();
    bim[t] = form.imag();
  });

  MpReport report;
  report.trials = trials;
  report.lambda_min = check_from("lambda_min", lmin, lo);
  report.lambda_max = check_from("lambda_max", lmax, hi);
  report.inverse_trace = check_from("inverse_trace", tr1, m0);
  report.inverse_sq_trace = check_from("inverse_sq_trace", tr2, m0_prime);
  report.bilinear_real = check_from("bilinear_real", bre, uv.real() * m0);
  report.bilinear_imag = check_from("bilinear_imag", bim, uv.imag() * m0);
  return report;
}

double trace_lemma_variance(const HermitianMatrix& a, const ComplexMatrix& b,
                            const HermitianMatrix& d, double sigma2, Index samples) {
  const double n = static_cast<double>(samples);
  const ComplexMatrix& am = a.matrix();
  const ComplexMatrix& dm = d.matrix();
  const double tr_a2 = (am * am).trace().real();
  const double tr_d2 = (dm * dm).trace().real();
  const double tr_d2_bb = (dm * dm * b.adjoint() * b).trace().real();
  const double zeta = sigma2 * sigma2 * tr_a2 * tr_d2 / n + 2.0 * sigma2 * tr_d2_bb;
  return zeta / n;
}

TraceLemmaReport validate_trace_lemma(Index sensors, Index samples, Index paths, double sigma2,
                                      const HermitianMatrix& a, const ComplexMatrix& b,
                                      const HermitianMatrix& d, std::size_t trials,
                                      std::uint64_t seed, unsigned threads) {
  if (a.dim() != sensors || d.dim() != paths || b.rows() != sensors || b.cols() != paths) {
    throw DimensionError("trace lemma needs A M x M, B M x L and D L x L");
  }
  if (trials < 2) {
    throw DomainError("trace lemma check needs at least two draws");
  }
  const double n = static_cast<double>(samples);
  // With A = U diag(w) U*, Gamma' = U* Gamma has the same law as Gamma, and
  // omega = Tr[D (Gamma'* diag(w) Gamma' + Gamma'* U*B + (U*B)* Gamma')].
  // Drawing Gamma' directly makes each trial O(M L^2) instead of O(M^2 L).
  const HermitianEigen eig = eigh(a);
  const ComplexMatrix b_rot = eig.vectors.adjoint() * b;
  const ComplexMatrix& dm = d.matrix();
  std::vector<double> omega(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    RngStream rng(seed, t);
    const ComplexMatrix gamma = sample_complex_gaussian(sensors, paths, sigma2 / n, rng);
    const ComplexMatrix cross = gamma.adjoint() * b_rot;
    ComplexMatrix inner = gamma.adjoint() * eig.values.cast<Complex>().asDiagonal() * gamma;
    inner += cross + cross.adjoint();
    omega[t] = (dm * inner).trace().real();
  });

  const EmpiricalSummary s = summarize(omega);
  TraceLemmaReport report;
  report.trials = trials;
  report.mean = {"omega_mean", s.mean, s.se_mean, sigma2 * a.trace() * d.trace() / n};
  report.variance = {"omega_variance", s.variance, s.se_variance,
                     trace_lemma_variance(a, b, d, sigma2, samples)};
  return report;
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_batch_csv(std::ostream& out, const TrialBatch& batch) {
  out << "trial_index,eta\n";
  const auto samples = batch.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i << ',' << format_double(samples[i]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "quantity,value,stderr\n";
  for (const SummaryRow& row : rows) {
    out << row.quantity << ',' << format_double(row.value) << ',' << format_double(row.std_error)
        << '\n';
  }
}

}  // namespace glrt

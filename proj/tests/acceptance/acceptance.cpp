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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Seeds are fixed below and never adjusted to results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glrt/asymptotics.hpp"
#include "glrt/cli.hpp"
#include "glrt/montecarlo.hpp"
#include "glrt/statistic.hpp"

namespace {

using namespace glrt;
namespace fs = std::filesystem;

constexpr std::uint64_t kMasterSeed = 1;
constexpr std::uint64_t kChannelSeed = 7;
constexpr std::size_t kTrials = 10000;

const unsigned kThreads = std::max(1u, std::thread::hardware_concurrency());

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Batches shared between criteria at the default dimensions.
class Context {
 public:
  const DetectionProblem& base() const { return base_; }

  const Channel& channel() {
    if (!channel_) {
      RngStream rng(kChannelSeed, 0);
      channel_ = generate_channel(150, 10, rng);
    }
    return *channel_;
  }

  const TrialBatch& h0() {
    if (!h0_) h0_ = run_trials(base_, Hypothesis::kH0, nullptr, kTrials, kMasterSeed, opts());
    return *h0_;
  }

  const TrialBatch& h1() {
    if (!h1_) {
      h1_ = run_trials(base_, Hypothesis::kH1, &channel(), kTrials, kMasterSeed, opts());
    }
    return *h1_;
  }

  static TrialOptions opts() {
    TrialOptions o;
    o.threads = kThreads;
    return o;
  }

 private:
  DetectionProblem base_{150, 300, 10, 1.0};
  std::optional<Channel> channel_;
  std::optional<TrialBatch> h0_;
  std::optional<TrialBatch> h1_;
};

Outcome form_equivalence() {
  const TrainingMatrix training = build_training_matrix(60, 3);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    RngStream rng(kMasterSeed, 1000 + i);
    const ComplexMatrix v = sample_complex_gaussian(20, 60, 1.0, rng);
    const double direct = eta_direct(v, training.s).eta;
    const double split = eta_split_h0(split_v(v, training)).eta;
    worst = std::max(worst, std::abs(direct - split) / (1.0 + std::abs(direct)));
  }
  return {worst <= 1e-8, "max |direct - split| / (1 + |eta|) = " + fmt(worst) + " (tol 1e-8)"};
}

Outcome whitening_invariance() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream rng(kMasterSeed, 2000 + i);
    const ComplexMatrix y = sample_complex_gaussian(20, 60, 1.0, rng);
    const ComplexMatrix s = sample_complex_gaussian(3, 60, 1.0, rng);
    const ComplexMatrix a = sample_complex_gaussian(20, 20, 1.0, rng);
    const Eigen::HouseholderQR<ComplexMatrix> qr(sample_complex_gaussian(3, 3, 1.0, rng));
    const ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(3, 3);
    const double base = eta_direct(y, s).eta;
    const double transformed = eta_direct(a * y, u * s).eta;
    worst = std::max(worst, std::abs(transformed - base) / std::abs(base));
  }
  return {worst <= 1e-8, "max relative change = " + fmt(worst) + " (tol 1e-8)"};
}

Outcome h0_moments_model_c(Context& ctx) {
  const EmpiricalSummary s = summarize(ctx.h0());
  const GaussianApprox c = model_c(ctx.base(), Hypothesis::kH0);
  const double mean_tol = 4.0 * std::sqrt(c.variance / static_cast<double>(kTrials)) + 0.05;
  const double mean_err = std::abs(s.mean - c.mean);
  const double var_rel = std::abs(s.variance - c.variance) / c.variance;
  return {mean_err <= mean_tol && var_rel <= 0.10,
          "mean " + fmt(s.mean) + " vs " + fmt(c.mean) + " (|err| " + fmt(mean_err) + ", tol " +
              fmt(mean_tol) + "); var " + fmt(s.variance) + " vs " + fmt(c.variance) +
              " (rel " + fmt(var_rel) + ", tol 0.1)"};
}

Outcome model_ordering(Context& ctx) {
  const EmpiricalSummary half = summarize(ctx.h0());
  const double err_a = std::abs(mean(approximate(Model::kA, ctx.base(), Hypothesis::kH0)) - half.mean);
  const double err_b = std::abs(mean(approximate(Model::kB, ctx.base(), Hypothesis::kH0)) - half.mean);
  const bool ordering = err_a >= 5.0 * err_b;
  std::string detail = "c=1/2: err_a/err_b = " + fmt(err_a / err_b) + " (need >= 5)";

  const DetectionProblem small(10, 320, 5, 1.0);
  const EmpiricalSummary s = summarize(
      run_trials(small, Hypothesis::kH0, nullptr, kTrials, kMasterSeed, Context::opts()));
  bool all_agree = true;
  detail += "; c=1/32: emp mean " + fmt(s.mean) + " +- " + fmt(s.se_mean);
  for (const Model m : {Model::kA, Model::kB, Model::kC}) {
    const double z = (mean(approximate(m, small, Hypothesis::kH0)) - s.mean) / s.se_mean;
    all_agree = all_agree && std::abs(z) <= 4.0;
    detail += std::string(", ") + to_string(m) + " z=" + fmt(z);
  }
  return {ordering && all_agree, detail + " (need |z| <= 4)"};
}

Outcome h1_additivity(Context& ctx) {
  const EmpiricalSummary s0 = summarize(ctx.h0());
  const EmpiricalSummary s1 = summarize(ctx.h1());
  const double sigma2 = ctx.base().sigma2();
  const double shift = h1_logdet_term(ctx.channel(), sigma2);
  const double spread = kappa1(ctx.channel(), sigma2) / static_cast<double>(ctx.base().samples());
  const double mean_err = std::abs((s1.mean - s0.mean) - shift);
  const double mean_tol = 4.0 * std::hypot(s0.se_mean, s1.se_mean) + 0.05;
  const double var_rel = std::abs((s1.variance - s0.variance) - spread) / spread;
  return {mean_err <= mean_tol && var_rel <= 0.15,
          "mean shift " + fmt(s1.mean - s0.mean) + " vs logdet " + fmt(shift) + " (|err| " +
              fmt(mean_err) + ", tol " + fmt(mean_tol) + "); var shift " +
              fmt(s1.variance - s0.variance) + " vs kappa1/N " + fmt(spread) + " (rel " +
              fmt(var_rel) + ", tol 0.15; combined se " +
              fmt(std::hypot(s0.se_variance, s1.se_variance) / spread) + ")"};
}

Outcome overdetermination() {
  RngStream rng(kChannelSeed, 0);
  const Channel h5 = generate_channel(150, 5, rng);
  Channel h10{ComplexMatrix::Zero(150, 10)};
  h10.h.leftCols(5) = h5.h;
  const DetectionProblem p5(150, 300, 5, 1.0);
  const DetectionProblem p10(150, 300, 10, 1.0);

  const double model_shift =
      model_b(p10, Hypothesis::kH1, &h10).mean - model_b(p5, Hypothesis::kH1, &h5).mean;
  const double target = 5.0 * std::log(2.0);
  const double kappa_gap = std::abs(kappa1(h10, 1.0) - kappa1(h5, 1.0));
  const bool model_ok = std::abs(model_shift - target) <= 1e-12 && kappa_gap <= 1e-12;

  const EmpiricalSummary e5 =
      summarize(run_trials(p5, Hypothesis::kH1, &h5, kTrials, kMasterSeed, Context::opts()));
  const EmpiricalSummary e10 =
      summarize(run_trials(p10, Hypothesis::kH1, &h10, kTrials, kMasterSeed, Context::opts()));
  const double se = std::hypot(e5.se_mean, e10.se_mean);
  const double emp_shift = e10.mean - e5.mean;
  const bool emp_ok = std::abs(emp_shift - target) <= 4.0 * se;
  return {model_ok && emp_ok,
          "model-(b) shift " + fmt(model_shift) + " vs 5 log 2 = " + fmt(target) +
              ", kappa1 gap " + fmt(kappa_gap) + "; empirical shift " + fmt(emp_shift) + " (" +
              fmt((emp_shift - target) / se) + " SE, need |.| <= 4)"};
}

Outcome normality(Context& ctx) {
  const GaussianApprox c = model_c(ctx.base(), Hypothesis::kH0);
  std::vector<double> z(ctx.h0().samples().begin(), ctx.h0().samples().end());
  for (double& v : z) v = (v - c.mean) / c.stddev();
  const ShapeStatistics shape = shape_statistics(z);
  const double ks = ks_statistic_normal(z);
  return {std::abs(shape.skewness) <= 0.1 && std::abs(shape.excess_kurtosis) <= 0.2 && ks <= 0.02,
          "skewness " + fmt(shape.skewness) + " (tol 0.1), excess kurtosis " +
              fmt(shape.excess_kurtosis) + " (tol 0.2), KS " + fmt(ks) + " (tol 0.02)"};
}

Outcome roc_consistency(Context& ctx) {
  const std::vector<double> grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  const RocCurve emp = empirical_roc(ctx.h0(), ctx.h1(), grid);
  const RocCurve hyb_c = hybrid_roc(approximate(Model::kC, ctx.base(), Hypothesis::kH0), ctx.h1(), grid);
  const RocCurve hyb_b = hybrid_roc(approximate(Model::kB, ctx.base(), Hypothesis::kH0), ctx.h1(), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(hyb_c.points[i].pnd - emp.points[i].pnd));
  }
  const double gap_c = std::abs(hyb_c.points[0].pnd - emp.points[0].pnd);
  const double gap_b = std::abs(hyb_b.points[0].pnd - emp.points[0].pnd);
  return {worst <= 0.05 && gap_b > gap_c,
          "max |hybrid(c) - empirical| = " + fmt(worst) + " (tol 0.05); at pfa=0.01 pnd emp " +
              fmt(emp.points[0].pnd) + ", hybrid(c) " + fmt(hyb_c.points[0].pnd) + ", hybrid(b) " +
              fmt(hyb_b.points[0].pnd)};
}

Outcome mp_validation() {
  const MpReport r = validate_mp_properties(500, 1000, 1.0, 20, kMasterSeed, kThreads);
  const double d_min = std::abs(r.lambda_min.empirical - r.lambda_min.theory);
  const double d_max = std::abs(r.lambda_max.empirical - r.lambda_max.theory);
  const double d_tr1 = std::abs(r.inverse_trace.empirical - 2.0);
  const double d_tr2 = std::abs(r.inverse_sq_trace.empirical - 8.0);
  return {d_min <= 0.05 && d_max <= 0.05 && d_tr1 <= 0.02 && d_tr2 <= 0.15,
          "lambda_min " + fmt(r.lambda_min.empirical) + " vs " + fmt(r.lambda_min.theory) +
              ", lambda_max " + fmt(r.lambda_max.empirical) + " vs " + fmt(r.lambda_max.theory) +
              " (tol 0.05); Tr inv " + fmt(r.inverse_trace.empirical) + " (tol 0.02); Tr inv^2 " +
              fmt(r.inverse_sq_trace.empirical) + " (tol 0.15)"};
}

Outcome trace_lemma() {
  const Index m = 150, n = 300, l = 10;
  const TraceLemmaReport r = validate_trace_lemma(
      m, n, l, 1.0, HermitianMatrix::identity(m), ComplexMatrix::Zero(m, l),
      HermitianMatrix::identity(l), kTrials, kMasterSeed, kThreads);
  const bool theory_ok = std::abs(r.mean.theory - 5.0) <= 1e-12 &&
                         std::abs(r.variance.theory - 1.0 / 60.0) <= 1e-15;
  const double z = (r.mean.empirical - r.mean.theory) / r.mean.std_error;
  const double var_rel = std::abs(r.variance.empirical - r.variance.theory) / r.variance.theory;
  return {theory_ok && std::abs(z) <= 4.0 && var_rel <= 0.10,
          "mean " + fmt(r.mean.empirical) + " vs " + fmt(r.mean.theory) + " (" + fmt(z) +
              " SE); var " + fmt(r.variance.empirical) + " vs " + fmt(r.variance.theory) +
              " (rel " + fmt(var_rel) + ", tol 0.1)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const char* configs[] = {
      "experiment = moments_vs_c\nM = 10\nL = 5\nN = 20,40,80\ntrials = 500\nmaster_seed = 3\n",
      "experiment = moments_vs_L\nM = 30\nN = 60\nL = 1..3\ntrials = 300\nmaster_seed = 3\n",
      "experiment = roc_hybrid\nM = 30\nN = 60\nL = 5\ntrials = 500\nmaster_seed = 3\n",
      "experiment = roc_theoretical\nM = 30\nN = 60\nL = 5\ntrials = 500\nmaster_seed = 3\n",
      "experiment = roc_growing_LMN\nL = 1..3\nM = 5L\nN = 10L\ntrials = 300\nmaster_seed = 3\n",
      "experiment = mp_validation\nM = 50\nN = 100\ntrials = 5\nmaster_seed = 3\n",
      "experiment = trace_lemma\nM = 30\nN = 60\nL = 5\ntrials = 2000\nmaster_seed = 3\n",
  };
  const fs::path root = fs::temp_directory_path() / "glrt_acceptance_determinism";
  fs::remove_all(root);
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const char* text : configs) {
    const ExperimentConfig config = parse_config_text(text);
    const fs::path one = root / (std::string(to_string(config.experiment)) + "_1");
    const fs::path four = root / (std::string(to_string(config.experiment)) + "_4");
    RunOptions single;
    single.threads = 1;
    RunOptions many;
    many.threads = 4;
    run_experiment(config, one, single);
    run_experiment(config, four, many);
    for (const auto& entry : fs::directory_iterator(one)) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(four / entry.path().filename())) {
        differing.push_back(entry.path().filename().string());
      }
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " CSV files compared across 1 and 4 threads";
  for (const auto& d : differing) detail += "; differs: " + d;
  return {differing.empty() && compared > 0, detail};
}

}  // namespace

int main() {
  Context ctx;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"algebraic form equivalence", form_equivalence},
      {"whitening invariance", whitening_invariance},
      {"H0 moment match, model (c)", [&] { return h0_moments_model_c(ctx); }},
      {"model ordering at c=1/2 and agreement at c=1/32", [&] { return model_ordering(ctx); }},
      {"H1 additivity", [&] { return h1_additivity(ctx); }},
      {"overdetermination law", overdetermination},
      {"normality screen", [&] { return normality(ctx); }},
      {"ROC consistency", [&] { return roc_consistency(ctx); }},
      {"Marcenko-Pastur validation", mp_validation},
      {"trace lemma", trace_lemma},
      {"determinism across thread counts", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first
              << ": " << outcome.detail << "  (" << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}

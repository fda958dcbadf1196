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

#include "glrt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "glrt/errors.hpp"
#include "glrt/montecarlo.hpp"
#include "glrt/statistic.hpp"
#include "json.hpp"

namespace glrt {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::string_view kVersion = GLRT_VERSION;

struct ExperimentName {
  Experiment experiment;
  const char* tag;
};

constexpr ExperimentName kExperimentNames[] = {
    {Experiment::kMomentsVsC, "moments_vs_c"},
    {Experiment::kMomentsVsL, "moments_vs_L"},
    {Experiment::kRocHybrid, "roc_hybrid"},
    {Experiment::kRocTheoretical, "roc_theoretical"},
    {Experiment::kRocGrowingLmn, "roc_growing_LMN"},
    {Experiment::kMpValidation, "mp_validation"},
    {Experiment::kTraceLemma, "trace_lemma"},
};

const char* const kKnownKeys[] = {"experiment", "M",            "N",       "L",
                                  "sigma2",     "trials",       "master_seed", "pfa_grid",
                                  "models",     "channel_seed", "zc_root"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class EntryReader {
 public:
  EntryReader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  const Entry& required(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError(source_ + ": missing required key '" + key + "'");
    }
    return it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    const std::string where =
        it == entries_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key '" + key + "': " + message);
  }

  template <typename T>
  T integer(const std::string& key, std::string_view text) const {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
  }

  double real(const std::string& key, std::string_view text) const {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(key, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::string source_;
};

// One element of a dimension list: a count, or a multiple of L.
struct DimTerm {
  long value = 0;
  bool times_l = false;
};

std::vector<DimTerm> parse_dim_list(const EntryReader& reader, const std::string& key,
                                    bool allow_multiple_of_l) {
  std::vector<DimTerm> terms;
  for (const std::string_view item : split_list(reader.required(key).value)) {
    if (item.empty()) {
      reader.fail(key, "empty list element");
    }
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const long lo = reader.integer<long>(key, trim(item.substr(0, dots)));
      const long hi = reader.integer<long>(key, trim(item.substr(dots + 2)));
      if (lo > hi) {
        reader.fail(key, "range " + std::string(item) + " is decreasing");
      }
      for (long v = lo; v <= hi; ++v) terms.push_back({v, false});
    } else if (item.back() == 'L') {
      if (!allow_multiple_of_l) {
        reader.fail(key, "only M and N may be given as a multiple of L");
      }
      terms.push_back({reader.integer<long>(key, trim(item.substr(0, item.size() - 1))), true});
    } else {
      terms.push_back({reader.integer<long>(key, item), false});
    }
  }
  return terms;
}

std::vector<RunDims> expand_runs(const EntryReader& reader, bool paths_optional) {
  const std::vector<DimTerm> l_terms = paths_optional && !reader.has("L")
                                           ? std::vector<DimTerm>{{1, false}}
                                           : parse_dim_list(reader, "L", false);
  const std::vector<DimTerm> m_terms = parse_dim_list(reader, "M", true);
  const std::vector<DimTerm> n_terms = parse_dim_list(reader, "N", true);
  const std::size_t count = std::max({l_terms.size(), m_terms.size(), n_terms.size()});
  for (const auto& [key, size] : {std::pair{"M", m_terms.size()}, std::pair{"N", n_terms.size()},
                                  std::pair{"L", l_terms.size()}}) {
    if (size != 1 && size != count) {
      reader.fail(key, "sweep has " + std::to_string(size) + " values but another sweep has " +
                           std::to_string(count));
    }
  }
  const auto pick = [count](const std::vector<DimTerm>& terms, std::size_t i) {
    return terms.size() == 1 ? terms[0] : terms[i];
  };
  std::vector<RunDims> runs;
  for (std::size_t i = 0; i < count; ++i) {
    const long l = pick(l_terms, i).value;
    const auto resolve = [l](DimTerm t) { return t.times_l ? t.value * l : t.value; };
    const RunDims run{resolve(pick(m_terms, i)), resolve(pick(n_terms, i)), l};
    const std::string label = "M=" + std::to_string(run.m) + ", N=" + std::to_string(run.n) +
                              ", L=" + std::to_string(run.l);
    if (run.m < 1 || run.l < 1) {
      reader.fail("M", "run " + label + " needs M >= 1 and L >= 1");
    }
    if (run.n <= run.m + run.l) {
      reader.fail("N", "run " + label + " violates N > M + L");
    }
    runs.push_back(run);
  }
  return runs;
}

std::string join_runs(const std::vector<RunDims>& runs, Index RunDims::*field) {
  std::string out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(runs[i].*field);
  }
  return out;
}

// Files produced by one experiment; removed again unless committed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  void write(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) {
      throw Error("cannot write " + path.string());
    }
  }

  std::vector<fs::path> commit() {
    committed_ = true;
    return written_;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool created_dir_ = false;
  bool committed_ = false;
};

const char* const kMomentsHeader =
    "M,N,L,c_N,d_N,hypothesis,model,mean_theory,var_theory,mean_emp,var_emp,se_mean,se_var\n";
const char* const kRocHeader = "pfa,pnd,method,model\n";

Channel channel_for(const ExperimentConfig& config, const RunDims& run) {
  RngStream rng(config.channel_seed, 0);
  return generate_channel(run.m, run.l, rng);
}

DetectionProblem problem_for(const ExperimentConfig& config, const RunDims& run) {
  return DetectionProblem(run.m, run.n, run.l, config.sigma2);
}

// H0 model for thresholds and the matching H1 model used by the theoretical
// ROC. Model (a) under H1 is N(log det(I + H*H/sigma2), kappa_1 / N).
Approximation h0_model(Model m, const DetectionProblem& problem) {
  return approximate(m, problem, Hypothesis::kH0);
}

GaussianApprox h1_model(Model m, const DetectionProblem& problem, const Channel& channel) {
  if (m == Model::kA) {
    return model_a_h1(problem, channel);
  }
  return std::get<GaussianApprox>(approximate(m, problem, Hypothesis::kH1, &channel));
}

struct TheoryMoments {
  double mean;
  double variance;
};

TheoryMoments theory_moments(Model m, const DetectionProblem& problem, Hypothesis hyp,
                             const Channel& channel) {
  if (hyp == Hypothesis::kH0) {
    const Approximation a = h0_model(m, problem);
    return {mean(a), variance(a)};
  }
  const GaussianApprox g = h1_model(m, problem, channel);
  return {g.mean, g.variance};
}

void append_roc(std::string& body, const RocCurve& curve, std::string_view model) {
  for (const RocPoint& p : curve.points) {
    body += format_double(p.pfa) + "," + format_double(p.pnd) + "," + to_string(curve.method) +
            "," + std::string(model) + "\n";
  }
}

struct RunBatches {
  TrialBatch h0;
  TrialBatch h1;
};

class ExperimentRunner {
 public:
  ExperimentRunner(const ExperimentConfig& config, const RunOptions& options, OutputSet& out)
      : config_(config), options_(options), out_(out) {
    trials_ = options.trials_override.value_or(config.trials);
    if (trials_ < 2) {
      throw ConfigError("trials must be at least 2");
    }
  }

  void run() {
    switch (config_.experiment) {
      case Experiment::kMomentsVsC:
      case Experiment::kMomentsVsL:
        run_moments();
        break;
      case Experiment::kRocHybrid:
      case Experiment::kRocTheoretical:
      case Experiment::kRocGrowingLmn:
        run_roc();
        break;
      case Experiment::kMpValidation:
        run_mp();
        break;
      case Experiment::kTraceLemma:
        run_trace_lemma();
        break;
    }
  }

 private:
  std::string run_label(const RunDims& run) const {
    return std::string(to_string(config_.experiment)) + " run M=" + std::to_string(run.m) +
           ", N=" + std::to_string(run.n) + ", L=" + std::to_string(run.l);
  }

  RunBatches batches_for(const RunDims& run, const Channel& channel) const {
    const DetectionProblem problem = problem_for(config_, run);
    TrialOptions opts;
    opts.threads = options_.threads;
    opts.zc_root = config_.zc_root;
    return {run_trials(problem, Hypothesis::kH0, nullptr, trials_, config_.master_seed, opts),
            run_trials(problem, Hypothesis::kH1, &channel, trials_, config_.master_seed, opts)};
  }

  void append_moments(std::string& body, const RunDims& run, const Channel& channel,
                      const RunBatches& batches) const {
    const DetectionProblem problem = problem_for(config_, run);
    for (const TrialBatch* batch : {&batches.h0, &batches.h1}) {
      const EmpiricalSummary s = summarize(*batch);
      for (const Model m : config_.models) {
        const TheoryMoments t = theory_moments(m, problem, batch->hypothesis(), channel);
        body += std::to_string(run.m) + "," + std::to_string(run.n) + "," + std::to_string(run.l) +
                "," + format_double(problem.sensor_ratio()) + "," +
                format_double(problem.path_ratio()) + "," + to_string(batch->hypothesis()) + "," +
                to_string(m) + "," + format_double(t.mean) + "," + format_double(t.variance) +
                "," + format_double(s.mean) + "," + format_double(s.variance) + "," +
                format_double(s.se_mean) + "," + format_double(s.se_variance) + "\n";
      }
    }
  }

  template <typename Body>
  void for_each_run(Body&& body) const {
    for (const RunDims& run : config_.runs) {
      try {
        body(run);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(run_label(run) + ": " + e.what());
      }
    }
  }

  void run_moments() {
    std::string body = kMomentsHeader;
    for_each_run([&](const RunDims& run) {
      const Channel channel = channel_for(config_, run);
      append_moments(body, run, channel, batches_for(run, channel));
    });
    out_.write("moments.csv", body);
  }

  void run_roc() {
    const bool per_run_files = config_.experiment == Experiment::kRocGrowingLmn;
    std::string moments = kMomentsHeader;
    std::string empirical = kRocHeader;
    std::string second = kRocHeader;
    for_each_run([&](const RunDims& run) {
      const DetectionProblem problem = problem_for(config_, run);
      const Channel channel = channel_for(config_, run);
      const RunBatches batches = batches_for(run, channel);
      append_moments(moments, run, channel, batches);
      const auto& grid = config_.pfa_grid;

      std::string emp_rows;
      append_roc(emp_rows, empirical_roc(batches.h0, batches.h1, grid), "none");
      std::string hybrid_rows;
      std::string theory_rows;
      for (const Model m : config_.models) {
        append_roc(hybrid_rows, hybrid_roc(h0_model(m, problem), batches.h1, grid), to_string(m));
        append_roc(theory_rows,
                   theoretical_roc(h0_model(m, problem), h1_model(m, problem, channel), grid),
                   to_string(m));
      }
      if (per_run_files) {
        out_.write("roc_L" + std::to_string(run.l) + "_M" + std::to_string(run.m) + "_N" +
                       std::to_string(run.n) + ".csv",
                   kRocHeader + emp_rows + hybrid_rows + theory_rows);
      } else {
        empirical += emp_rows;
        second += config_.experiment == Experiment::kRocHybrid ? hybrid_rows : theory_rows;
      }
    });
    out_.write("moments.csv", moments);
    if (!per_run_files) {
      out_.write("roc_empirical.csv", empirical);
      out_.write(config_.experiment == Experiment::kRocHybrid ? "roc_hybrid.csv"
                                                              : "roc_theoretical.csv",
                 second);
    }
  }

  static void append_check(std::vector<SummaryRow>& rows, const PropertyCheck& c) {
    rows.push_back({c.name, c.empirical, c.std_error});
    rows.push_back({c.name + "_theory", c.theory, 0.0});
  }

  void run_mp() {
    const RunDims& run = config_.runs.front();
    std::vector<SummaryRow> rows;
    for_each_run([&](const RunDims&) {
      const MpReport report = validate_mp_properties(run.m, run.n, config_.sigma2, trials_,
                                                     config_.master_seed, options_.threads);
      for (const PropertyCheck& c : report.all()) append_check(rows, c);
    });
    std::ostringstream body;
    write_summary_csv(body, rows);
    out_.write("mp_validation.csv", body.str());
  }

  void run_trace_lemma() {
    const RunDims& run = config_.runs.front();
    std::vector<SummaryRow> rows;
    for_each_run([&](const RunDims&) {
      const TraceLemmaReport report = validate_trace_lemma(
          run.m, run.n, run.l, config_.sigma2, HermitianMatrix::identity(run.m),
          ComplexMatrix::Zero(run.m, run.l), HermitianMatrix::identity(run.l), trials_,
          config_.master_seed, options_.threads);
      append_check(rows, report.mean);
      append_check(rows, report.variance);
    });
    std::ostringstream body;
    write_summary_csv(body, rows);
    out_.write("trace_lemma.csv", body.str());
  }

  const ExperimentConfig& config_;
  const RunOptions& options_;
  OutputSet& out_;
  std::size_t trials_ = 0;
};

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json config_to_json(const ExperimentConfig& config) {
  Json echo = Json::object();
  std::istringstream lines(config.canonical_text());
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    echo[std::string(trim(std::string_view(line).substr(0, eq)))] =
        std::string(trim(std::string_view(line).substr(eq + 1)));
  }
  return echo;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  for (const std::string_view cell : split_list(line)) cells.emplace_back(cell);
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  return rows;
}

}  // namespace

const char* to_string(Experiment e) noexcept {
  for (const auto& n : kExperimentNames) {
    if (n.experiment == e) return n.tag;
  }
  return "?";
}

Experiment parse_experiment(std::string_view tag) {
  for (const auto& n : kExperimentNames) {
    if (tag == n.tag) return n.experiment;
  }
  throw ConfigError("unknown experiment '" + std::string(tag) + "'");
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    for (const auto& n : kExperimentNames) v.push_back(n.experiment);
    return v;
  }();
  return all;
}

std::vector<double> default_pfa_grid() {
  return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::string ExperimentConfig::canonical_text() const {
  std::string grid;
  for (std::size_t i = 0; i < pfa_grid.size(); ++i) {
    grid += (i > 0 ? "," : "") + format_double(pfa_grid[i]);
  }
  std::string model_list;
  for (std::size_t i = 0; i < models.size(); ++i) {
    model_list += std::string(i > 0 ? "," : "") + to_string(models[i]);
  }
  return "experiment = " + std::string(to_string(experiment)) + "\n" +
         "M = " + join_runs(runs, &RunDims::m) + "\n" +
         "N = " + join_runs(runs, &RunDims::n) + "\n" +
         "L = " + join_runs(runs, &RunDims::l) + "\n" +
         "sigma2 = " + format_double(sigma2) + "\n" +
         "trials = " + std::to_string(trials) + "\n" +
         "master_seed = " + std::to_string(master_seed) + "\n" +
         "channel_seed = " + std::to_string(channel_seed) + "\n" +
         "zc_root = " + std::to_string(zc_root) + "\n" +
         "pfa_grid = " + grid + "\n" +
         "models = " + model_list + "\n";
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == text.npos ? text.npos : end - start);
    start = end == text.npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = src + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == line.npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (key == "seed") key = "master_seed";
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (entries.contains(key)) {
      throw ConfigError(where + ": key '" + key + "' repeats line " +
                        std::to_string(entries[key].line));
    }
    entries[key] = {std::string(trim(line.substr(eq + 1))), line_no};
  }

  const EntryReader reader(std::move(entries), src);
  ExperimentConfig config;
  try {
    config.experiment = parse_experiment(reader.required("experiment").value);
  } catch (const ConfigError& e) {
    if (!reader.has("experiment")) throw;
    reader.fail("experiment", e.what());
  }
  config.runs = expand_runs(reader, config.experiment == Experiment::kMpValidation);

  const bool single_run = config.experiment == Experiment::kRocHybrid ||
                          config.experiment == Experiment::kRocTheoretical ||
                          config.experiment == Experiment::kMpValidation ||
                          config.experiment == Experiment::kTraceLemma;
  if (single_run && config.runs.size() != 1) {
    reader.fail("N", std::string(to_string(config.experiment)) + " takes a single (M, N, L)");
  }

  config.trials = reader.integer<std::size_t>("trials", reader.required("trials").value);
  if (config.trials < 2) {
    reader.fail("trials", "must be at least 2");
  }
  config.master_seed =
      reader.integer<std::uint64_t>("master_seed", reader.required("master_seed").value);
  config.channel_seed =
      reader.has("channel_seed")
          ? reader.integer<std::uint64_t>("channel_seed", reader.required("channel_seed").value)
          : config.master_seed;

  if (reader.has("sigma2")) {
    config.sigma2 = reader.real("sigma2", reader.required("sigma2").value);
    if (!(config.sigma2 > 0.0) || !std::isfinite(config.sigma2)) {
      reader.fail("sigma2", "must be positive and finite");
    }
  }

  if (reader.has("zc_root")) {
    config.zc_root = reader.integer<long>("zc_root", reader.required("zc_root").value);
  }
  for (const RunDims& run : config.runs) {
    const long n = static_cast<long>(run.n);
    if (config.zc_root < 1 || config.zc_root >= n || std::gcd(config.zc_root, n) != 1) {
      reader.fail("zc_root", "root " + std::to_string(config.zc_root) +
                                 " is not coprime with and below N=" + std::to_string(n));
    }
  }

  if (reader.has("pfa_grid")) {
    const std::string& raw = reader.required("pfa_grid").value;
    if (raw.empty()) {
      reader.fail("pfa_grid", "grid is empty");
    }
    for (const std::string_view item : split_list(raw)) {
      config.pfa_grid.push_back(reader.real("pfa_grid", item));
    }
    try {
      validate_pfa_grid(config.pfa_grid);
    } catch (const DomainError& e) {
      reader.fail("pfa_grid", e.what());
    }
  } else {
    config.pfa_grid = default_pfa_grid();
  }

  if (reader.has("models")) {
    for (const std::string_view item : split_list(reader.required("models").value)) {
      Model m{};
      if (item == "a") {
        m = Model::kA;
      } else if (item == "b") {
        m = Model::kB;
      } else if (item == "c") {
        m = Model::kC;
      } else {
        reader.fail("models", "unknown model '" + std::string(item) + "', expected a, b or c");
      }
      if (std::find(config.models.begin(), config.models.end(), m) != config.models.end()) {
        reader.fail("models", "model '" + std::string(item) + "' listed twice");
      }
      config.models.push_back(m);
    }
  } else {
    config.models = {Model::kA, Model::kB, Model::kC};
  }
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config,
                                                  const std::filesystem::path& out_dir,
                                                  const RunOptions& options) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  OutputSet out(out_dir);
  ExperimentRunner(config, options, out).run();

  ExperimentConfig effective = config;
  effective.trials = options.trials_override.value_or(config.trials);
  Json manifest = Json::object();
  manifest["config"] = config_to_json(effective);
  manifest["master_seed"] = config.master_seed;
  manifest["channel_seed"] = config.channel_seed;
  manifest["version"] = std::string(kVersion);
  manifest["started_at"] = utc_timestamp(started);
  manifest["elapsed_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.write("manifest.json", manifest.dump(2) + "\n");
  return out.commit();
}

ExperimentConfig load_manifest_config(const std::filesystem::path& out_dir) {
  std::ifstream in(out_dir / "manifest.json");
  if (!in) {
    throw ConfigError("no manifest.json in " + out_dir.string());
  }
  std::string text;
  try {
    const Json manifest = Json::parse(in);
    for (const auto& [key, value] : manifest.at("config").items()) {
      text += key + " = " + value.get<std::string>() + "\n";
    }
  } catch (const Json::exception& e) {
    throw ConfigError("manifest.json: " + std::string(e.what()));
  }
  return parse_config_text(text, "manifest.json");
}

VerifyReport verify_outputs(const std::filesystem::path& out_dir) {
  const ExperimentConfig config = load_manifest_config(out_dir);
  VerifyReport report;
  const auto check = [&](const std::string& where, const std::string& on_disk, double value) {
    const std::string expected = format_double(value);
    if (on_disk != expected) {
      report.mismatches.push_back(where + ": file has " + on_disk + ", recomputed " + expected);
    }
  };
  const auto find_run = [&](Index m, Index n, Index l) -> const RunDims& {
    for (const RunDims& r : config.runs) {
      if (r.m == m && r.n == n && r.l == l) return r;
    }
    throw ConfigError("row for M=" + std::to_string(m) + ", N=" + std::to_string(n) +
                      ", L=" + std::to_string(l) + " is not in the manifest config");
  };
  const auto model_from = [](const std::string& s) {
    return s == "a" ? Model::kA : s == "b" ? Model::kB : Model::kC;
  };

  if (const fs::path moments = out_dir / "moments.csv"; fs::exists(moments)) {
    const auto rows = read_csv(moments);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.size() != 13) {
        report.mismatches.push_back("moments.csv row " + std::to_string(i) + ": malformed");
        continue;
      }
      const RunDims& run = find_run(std::stol(r[0]), std::stol(r[1]), std::stol(r[2]));
      const DetectionProblem problem = problem_for(config, run);
      const Hypothesis hyp = r[5] == "H0" ? Hypothesis::kH0 : Hypothesis::kH1;
      const TheoryMoments t =
          theory_moments(model_from(r[6]), problem, hyp, channel_for(config, run));
      const std::string where = "moments.csv row " + std::to_string(i);
      check(where + " c_N", r[3], problem.sensor_ratio());
      check(where + " d_N", r[4], problem.path_ratio());
      check(where + " mean_theory", r[7], t.mean);
      check(where + " var_theory", r[8], t.variance);
      ++report.rows_checked;
    }
  }

  // Theoretical ROC rows, either in roc_theoretical.csv or in per-run files.
  std::vector<std::pair<fs::path, RunDims>> roc_files;
  if (config.experiment == Experiment::kRocTheoretical) {
    roc_files.emplace_back(out_dir / "roc_theoretical.csv", config.runs.front());
  } else if (config.experiment == Experiment::kRocGrowingLmn) {
    for (const RunDims& run : config.runs) {
      roc_files.emplace_back(out_dir / ("roc_L" + std::to_string(run.l) + "_M" +
                                        std::to_string(run.m) + "_N" + std::to_string(run.n) +
                                        ".csv"),
                             run);
    }
  }
  for (const auto& [path, run] : roc_files) {
    if (!fs::exists(path)) {
      report.mismatches.push_back(path.filename().string() + ": missing");
      continue;
    }
    const DetectionProblem problem = problem_for(config, run);
    const Channel channel = channel_for(config, run);
    const auto rows = read_csv(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.size() != 4 || r[2] != "theoretical") continue;
      const Model m = model_from(r[3]);
      const std::vector<double> grid = {std::stod(r[0])};
      const RocCurve curve =
          theoretical_roc(h0_model(m, problem), h1_model(m, problem, channel), grid);
      check(path.filename().string() + " row " + std::to_string(i) + " pnd", r[1],
            curve.points.front().pnd);
      ++report.rows_checked;
    }
  }

  const auto verify_summary = [&](const std::string& name, const std::vector<PropertyCheck>& checks) {
    const fs::path path = out_dir / name;
    if (!fs::exists(path)) return;
    std::map<std::string, std::string> on_disk;
    for (const auto& r : read_csv(path)) {
      if (r.size() == 3) on_disk[r[0]] = r[1];
    }
    for (const PropertyCheck& c : checks) {
      const auto it = on_disk.find(c.name + "_theory");
      if (it == on_disk.end()) {
        report.mismatches.push_back(name + ": missing " + c.name + "_theory");
        continue;
      }
      check(name + " " + c.name + "_theory", it->second, c.theory);
      ++report.rows_checked;
    }
  };
  const RunDims& first = config.runs.front();
  if (config.experiment == Experiment::kMpValidation) {
    // Two draws suffice to regenerate the theory column, which depends only on
    // the dimensions, sigma2 and the seeded unit vectors.
    verify_summary("mp_validation.csv",
                   validate_mp_properties(first.m, first.n, config.sigma2, 2, config.master_seed)
                       .all());
  } else if (config.experiment == Experiment::kTraceLemma) {
    const HermitianMatrix a = HermitianMatrix::identity(first.m);
    const HermitianMatrix d = HermitianMatrix::identity(first.l);
    const double n = static_cast<double>(first.n);
    verify_summary("trace_lemma.csv",
                   {{"omega_mean", 0, 0, config.sigma2 * a.trace() * d.trace() / n},
                    {"omega_variance", 0, 0,
                     trace_lemma_variance(a, ComplexMatrix::Zero(first.m, first.l), d,
                                          config.sigma2, first.n)}});
  }
  return report;
}

}  // namespace glrt

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mobsense/beta.hpp"
#include "mobsense/geometry.hpp"
#include "mobsense/line.hpp"
#include "mobsense/random.hpp"
#include "mobsense/square.hpp"

namespace mobsense {

enum class Experiment { anchors_1d, mv_1d, cv1_1d, cv2_2d, oracle_2d, beta_lemmas };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::anchors_1d: return "anchors_1d";
    case Experiment::mv_1d: return "mv_1d";
    case Experiment::cv1_1d: return "cv1_1d";
    case Experiment::cv2_2d: return "cv2_2d";
    case Experiment::oracle_2d: return "oracle_2d";
    case Experiment::beta_lemmas: return "beta_lemmas";
  }
  return "?";
}

inline Experiment parse_experiment(std::string_view s) {
  for (Experiment e : {Experiment::anchors_1d, Experiment::mv_1d, Experiment::cv1_1d, Experiment::cv2_2d,
                       Experiment::oracle_2d, Experiment::beta_lemmas})
    if (to_string(e) == s) return e;
  throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

/**
 * @brief One Monte Carlo experiment.
 *
 * Rates are stored relative to n so one config spans a whole grid:
 * rho = rho_n / n and s = s_n / n on the line, r1 = r_2n / (2n); on the square
 * n is replaced by q = floor(sqrt n).
 */
struct ExperimentConfig {
  Experiment experiment = Experiment::anchors_1d;
  std::vector<std::size_t> n_grid;
  double a = 1.0;
  double rho_n = 1.8;
  double s_n = 0.5;
  double r_2n = 1.2;
  std::size_t reps = 1;
  std::uint64_t master_seed = 0;
  std::string output;

  void validate() const {
    if (n_grid.empty()) throw std::invalid_argument("config: n_grid must not be empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 1) throw std::invalid_argument("config: n values must be >= 1");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("config: n_grid must be ascending");
    }
    if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("config: a must be > 0");
    switch (experiment) {
      case Experiment::mv_1d:
        if (!(s_n >= 0.0 && s_n < rho_n)) throw std::invalid_argument("config: need 0 <= s_n < rho_n");
        break;
      case Experiment::cv1_1d:
      case Experiment::cv2_2d:
        if (!(r_2n > 1.0)) throw std::invalid_argument("config: need r_2n > 1");
        if (!(s_n >= 0.0 && s_n < 1.0)) throw std::invalid_argument("config: need 0 <= s_n < 1");
        break;
      case Experiment::oracle_2d:
        for (std::size_t n : n_grid)
          if (isqrt(n) * isqrt(n) != n) throw std::invalid_argument("config: oracle_2d needs perfect-square n");
        break;
      case Experiment::beta_lemmas:
        if (!(rho_n > 1.0)) throw std::invalid_argument("config: beta_lemmas needs rho_n > 1");
        if (!(s_n >= 0.0 && s_n < 1.0)) throw std::invalid_argument("config: need 0 <= s_n < 1");
        break;
      case Experiment::anchors_1d: break;
    }
  }
};

struct TrialRow {
  Experiment experiment = Experiment::anchors_1d;
  std::size_t n = 0;
  double a = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed_stream = 0;
  double cost = 0.0;
  double cost_phasewise = 0.0;
  std::optional<bool> ci_verified;  ///< empty where the predicate does not apply
  std::size_t deactivated_count = 0;
};

struct AggregateRow {
  std::size_t n = 0;
  double a = 0.0;
  std::size_t reps = 0;
  double mean = 0.0;
  double std_err = 0.0;
  std::optional<double> centerline;
};

struct ResultTable {
  std::vector<TrialRow> trials;
  std::vector<AggregateRow> aggregates;
};

/// Raised when an algorithm output fails its coverage-and-interference check.
class CandIViolation : public std::runtime_error {
 public:
  CandIViolation(std::string what, SeedSpec seed, std::size_t n, std::size_t trial)
      : std::runtime_error(std::move(what)), seed_(seed), n_(n), trial_(trial) {}

  SeedSpec seed() const { return seed_; }
  std::size_t n() const { return n_; }
  std::size_t trial() const { return trial_; }

 private:
  SeedSpec seed_;
  std::size_t n_;
  std::size_t trial_;
};

/// Stream id of trial `trial` at size n; independent of the rest of the grid.
inline std::uint64_t stream_id(std::size_t n, std::size_t trial) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(trial);
}

namespace detail {

[[noreturn]] inline void fail_ci(const ExperimentConfig& cfg, const CandIVerdict& v, SeedSpec seed, std::size_t n,
                                 std::size_t trial) {
  std::ostringstream os;
  os << to_string(cfg.experiment) << " n=" << n << " trial=" << trial << " master_seed=" << seed.master_seed
     << " stream_id=" << seed.stream_id << ": " << v.message;
  throw CandIViolation(os.str(), seed, n, trial);
}

/// MV post-conditions: consecutive active gaps in [s, rho], leftmost active within rho/2 of 0.
inline bool mv_postconditions_hold(const Placement1D& p, const MVParams& mv) {
  std::vector<double> pos;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.active[i]) pos.push_back(p.current[i]);
  if (pos.empty() || pos.front() > 0.5 * mv.rho + kGeomTol) return false;
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const double gap = pos[i] - pos[i - 1];
    if (gap < mv.s - kGeomTol || gap > mv.rho + kGeomTol) return false;
  }
  return true;
}

}  // namespace detail

/// Runs one trial of the configured experiment. Throws CandIViolation on a failed check.
inline TrialRow run_trial(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
  const SeedSpec seed{cfg.master_seed, stream_id(n, trial)};
  SplitMix64 rng(seed);
  const double nd = static_cast<double>(n);
  TrialRow row;
  row.experiment = cfg.experiment;
  row.n = n;
  row.a = cfg.a;
  row.trial = trial;
  row.seed_stream = seed.stream_id;

  auto record = [&](const DisplacementReport& rep) {
    row.cost = rep.total;
    row.cost_phasewise = rep.phasewise_total;
    row.deactivated_count = rep.deactivated_count;
  };

  switch (cfg.experiment) {
    case Experiment::anchors_1d: {
      const LineResult res = move_to_anchors_1d(sample_sorted_uniform_1d(n, rng), cfg.a);
      record(res.report);
      const CandIVerdict v = verify_ci_1d(res.placement, {1, 1.0 / (2.0 * nd), 1.0 / nd});
      if (!v) detail::fail_ci(cfg, v, seed, n, trial);
      row.ci_verified = true;
      break;
    }
    case Experiment::mv_1d: {
      const MVParams mv{cfg.rho_n / nd, cfg.s_n / nd};
      const LineResult res = mv_algorithm(sample_sorted_uniform_1d(n, rng), mv, cfg.a);
      record(res.report);
      if (!detail::mv_postconditions_hold(res.placement, mv)) {
        CandIVerdict v;
        v.ok = false;
        v.message = "MV gap/leftmost post-condition violated";
        detail::fail_ci(cfg, v, seed, n, trial);
      }
      break;
    }
    case Experiment::cv1_1d: {
      const CV1Params params{cfg.r_2n / (2.0 * nd), cfg.s_n / nd, cfg.a};
      const CV1Result res = cv1_algorithm(sample_sorted_uniform_1d(n, rng), params);
      record(res.report);
      const CandIVerdict v = verify_ci_1d(res.placement, {1, params.r1, params.s});
      if (!v) detail::fail_ci(cfg, v, seed, n, trial);
      row.ci_verified = true;
      break;
    }
    case Experiment::cv2_2d: {
      const double q = static_cast<double>(isqrt(n));
      const CV2Params params{cfg.r_2n / (2.0 * q), cfg.s_n / q, cfg.a};
      Placement2D start = sample_uniform_2d(n, rng);
      const CV2Result res = cv2_algorithm(start, params, rng);
      record(res.report);
      const CandIVerdict v = verify_ci_2d(res.placement, {2, params.r2, params.s});
      if (!v) detail::fail_ci(cfg, v, seed, n, trial);
      row.ci_verified = true;
      break;
    }
    case Experiment::oracle_2d: {
      const std::size_t q = isqrt(n);
      row.cost = anchor_matching_cost_2d(sample_uniform_2d(n, rng), grid_anchors(q), cfg.a);
      row.cost_phasewise = row.cost;
      break;
    }
    case Experiment::beta_lemmas: {
      // Deterministic: cost = n^(a-1) * upper-kind sum at rho, phasewise column = lower-kind sum at s.
      const double scale = std::pow(nd, cfg.a - 1.0);
      row.cost = scale * lemma_sum_bound(n, cfg.a, cfg.rho_n / nd, MomentKind::upper);
      row.cost_phasewise = scale * lemma_sum_bound(n, cfg.a, cfg.s_n / nd, MomentKind::lower);
      break;
    }
  }
  return row;
}

/// Trials per n; beta_lemmas is deterministic and runs once per n.
inline std::size_t effective_reps(const ExperimentConfig& cfg) {
  return cfg.experiment == Experiment::beta_lemmas ? 1 : cfg.reps;
}

/// Per-n mean and standard error, in n_grid order, summing trials in index order.
inline std::vector<AggregateRow> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRow>& trials) {
  std::vector<AggregateRow> out;
  std::size_t pos = 0;
  for (std::size_t n : cfg.n_grid) {
    AggregateRow agg{n, cfg.a, 0, 0.0, 0.0, std::nullopt};
    const std::size_t begin = pos;
    while (pos < trials.size() && trials[pos].n == n) agg.mean += trials[pos++].cost;
    agg.reps = pos - begin;
    if (agg.reps == 0) throw std::logic_error("aggregate: no trials for n=" + std::to_string(n));
    agg.mean /= static_cast<double>(agg.reps);
    if (agg.reps > 1) {
      double ss = 0.0;
      for (std::size_t i = begin; i < pos; ++i) ss += (trials[i].cost - agg.mean) * (trials[i].cost - agg.mean);
      agg.std_err = std::sqrt(ss / static_cast<double>(agg.reps - 1) / static_cast<double>(agg.reps));
    }
    if (cfg.experiment == Experiment::anchors_1d) agg.centerline = anchor_cost_leading_term(cfg.a, n);
    out.push_back(agg);
  }
  return out;
}

/**
 * @brief Runs every (n, trial) of the config across `workers` threads.
 *
 * Each trial seeds its own generator from (master_seed, stream_id(n, trial)),
 * and rows are stored by (n, trial) slot, so the table is identical for any
 * worker count. On failure the error of the earliest failing slot is rethrown.
 */
inline ResultTable run_experiment(const ExperimentConfig& cfg, std::size_t workers = 1) {
  cfg.validate();
  const std::size_t reps = effective_reps(cfg);
  const std::size_t total = cfg.n_grid.size() * reps;
  std::vector<TrialRow> rows(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= total || failed.load()) return;
      try {
        rows[slot] = run_trial(cfg, cfg.n_grid[slot / reps], slot % reps);
      } catch (...) {
        errors[slot] = std::current_exception();
        failed.store(true);
      }
    }
  };

  workers = std::max<std::size_t>(1, std::min(workers, total));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ResultTable table;
  table.trials = std::move(rows);
  table.aggregates = aggregate(cfg, table.trials);
  return table;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// "t.csv" -> "t.agg.csv"; any other name gets ".agg.csv" appended.
inline std::string aggregate_path(const std::string& out) {
  constexpr std::string_view ext = ".csv";
  if (out.size() >= ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".agg.csv";
  return out + ".agg.csv";
}

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
  os << "experiment,n,a,trial,seed_stream,cost,cost_phasewise,ci_verified,deactivated_count\n";
  for (const TrialRow& r : rows) {
    os << to_string(r.experiment) << ',' << r.n << ',' << format_double(r.a) << ',' << r.trial << ','
       << r.seed_stream << ',' << format_double(r.cost) << ',' << format_double(r.cost_phasewise) << ','
       << (r.ci_verified ? (*r.ci_verified ? "true" : "false") : "") << ',' << r.deactivated_count << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "n,a,reps,mean,std_err,centerline\n";
  for (const AggregateRow& r : rows) {
    os << r.n << ',' << format_double(r.a) << ',' << r.reps << ',' << format_double(r.mean) << ','
       << format_double(r.std_err) << ',' << (r.centerline ? format_double(*r.centerline) : "") << '\n';
  }
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  T value{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("cannot parse " + std::string(what) + " from '" + t + "'");
  return value;
}

}  // namespace detail

/// Writes the per-trial CSV at `path` and the aggregate CSV next to it.
inline void write_result_files(const std::string& path, const ResultTable& table) {
  {
    auto os = detail::open_output(path);
    write_trials_csv(os, table.trials);
  }
  auto os = detail::open_output(aggregate_path(path));
  write_aggregate_csv(os, table.aggregates);
}

/// Reads an aggregate CSV (as written by write_aggregate_csv).
inline std::vector<AggregateRow> read_aggregate_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("aggregate csv: empty input");
  const auto header = detail::split(detail::trim(line), ',');
  auto col = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("aggregate csv: missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cn = col("n"), ca = col("a"), cr = col("reps"), cm = col("mean"), cs = col("std_err");
  std::vector<AggregateRow> rows;
  while (std::getline(is, line)) {
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split(detail::trim(line), ',');
    if (f.size() != header.size()) throw std::invalid_argument("aggregate csv: ragged row '" + line + "'");
    AggregateRow r;
    r.n = detail::parse_number<std::size_t>(f[cn], "n");
    r.a = detail::parse_number<double>(f[ca], "a");
    r.reps = detail::parse_number<std::size_t>(f[cr], "reps");
    r.mean = detail::parse_number<double>(f[cm], "mean");
    r.std_err = detail::parse_number<double>(f[cs], "std_err");
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_aggregate_csv(is);
}

// ---------------------------------------------------------------------------
// Config files: flat "key = value" lines, '#' comments, snake_case keys.

inline void apply_config_entry(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "experiment") {
    cfg.experiment = parse_experiment(detail::trim(value));
  } else if (key == "n_grid") {
    cfg.n_grid.clear();
    for (const auto& part : detail::split(value, ','))
      cfg.n_grid.push_back(detail::parse_number<std::size_t>(part, "n_grid"));
  } else if (key == "a") {
    cfg.a = detail::parse_number<double>(value, "a");
  } else if (key == "rho_n") {
    cfg.rho_n = detail::parse_number<double>(value, "rho_n");
  } else if (key == "s_n") {
    cfg.s_n = detail::parse_number<double>(value, "s_n");
  } else if (key == "r_2n") {
    cfg.r_2n = detail::parse_number<double>(value, "r_2n");
  } else if (key == "reps") {
    cfg.reps = detail::parse_number<std::size_t>(value, "reps");
  } else if (key == "master_seed") {
    cfg.master_seed = detail::parse_number<std::uint64_t>(value, "master_seed");
  } else if (key == "output") {
    cfg.output = detail::trim(value);
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

/// Parses a config document on top of `cfg`. Keys encountered are appended to `seen` when given.
inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig cfg = {}, std::vector<std::string>* seen = nullptr) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = detail::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    apply_config_entry(cfg, key, std::string_view(body).substr(eq + 1));
    if (seen) seen->push_back(key);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg = {},
                                    std::vector<std::string>* seen = nullptr) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(is, std::move(cfg), seen);
}

// ---------------------------------------------------------------------------
// Fits

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline FitResult least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares: need >= 2 paired points");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: x values are all equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  f.points = xs.size();
  return f;
}

/// Log-log fit of mean against n over rows with n_min <= n <= n_max.
inline FitResult fit_scaling(const std::vector<AggregateRow>& rows, std::size_t n_min,
                             std::size_t n_max = std::numeric_limits<std::size_t>::max()) {
  std::vector<double> xs, ys;
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (const AggregateRow& r : rows) {
    if (r.n < n_min || r.n > n_max) continue;
    if (!(r.mean > 0.0)) throw std::invalid_argument("fit_scaling: non-positive mean at n=" + std::to_string(r.n));
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(r.mean));
    lo = std::min(lo, r.n);
    hi = std::max(hi, r.n);
  }
  if (xs.size() < 4) throw std::invalid_argument("fit_scaling: need at least 4 rows in range");
  FitResult f = least_squares(xs, ys);
  f.n_min = lo;
  f.n_max = hi;
  return f;
}

/// Linear fit of mean against ln n.
inline FitResult fit_against_log_n(const std::vector<AggregateRow>& rows) {
  std::vector<double> xs, ys;
  for (const AggregateRow& r : rows) {
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(r.mean);
  }
  FitResult f = least_squares(xs, ys);
  f.n_min = rows.front().n;
  f.n_max = rows.back().n;
  return f;
}

// ---------------------------------------------------------------------------
// Canned experiments

struct Case2Batch {
  std::size_t q = 0;
  std::size_t n = 0;
  std::size_t batch = 0;  ///< 1-based
  double batch_mean = 0.0;
  double centerline = 0.0;
  double trial_sd = 0.0;  ///< sample sd of the trials at this n
};

struct Case2Table {
  ResultTable runs;
  std::vector<Case2Batch> batches;
};

/**
 * @brief Equidistant-anchor experiment at n = q^2, q = 1..q_max: `reps` trials
 * per n, averaged in consecutive batches of `batch_size`, alongside the
 * leading-term centerline.
 */
inline Case2Table replicate_case2(double a, std::uint64_t master_seed, std::size_t q_max = 60,
                                  std::size_t reps = 200, std::size_t batch_size = 10, std::size_t workers = 1) {
  if (batch_size < 1 || reps % batch_size != 0) throw std::invalid_argument("replicate_case2: reps must be a multiple of batch_size");
  ExperimentConfig cfg;
  cfg.experiment = Experiment::anchors_1d;
  cfg.a = a;
  cfg.reps = reps;
  cfg.master_seed = master_seed;
  for (std::size_t q = 1; q <= q_max; ++q) cfg.n_grid.push_back(q * q);

  Case2Table out;
  out.runs = run_experiment(cfg, workers);
  for (std::size_t qi = 0; qi < q_max; ++qi) {
    const AggregateRow& agg = out.runs.aggregates[qi];
    const double sd = agg.std_err * std::sqrt(static_cast<double>(reps));
    for (std::size_t k = 0; k < reps / batch_size; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < batch_size; ++j) sum += out.runs.trials[qi * reps + k * batch_size + j].cost;
      out.batches.push_back({qi + 1, agg.n, k + 1, sum / static_cast<double>(batch_size), *agg.centerline, sd});
    }
  }
  return out;
}

inline void write_case2_batches_csv(std::ostream& os, const std::vector<Case2Batch>& rows, double a) {
  os << "n,a,batch,batch_mean,centerline,trial_sd\n";
  for (const Case2Batch& b : rows)
    os << b.n << ',' << format_double(a) << ',' << b.batch << ',' << format_double(b.batch_mean) << ','
       << format_double(b.centerline) << ',' << format_double(b.trial_sd) << '\n';
}

struct OracleRow {
  std::size_t q = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double std_err = 0.0;
  double normalized = 0.0;  ///< mean / ((ln n)^(a/2) n^(1 - a/2))
};

struct OracleTable {
  ResultTable runs;
  std::vector<OracleRow> rows;
};

/// Exact min-cost matching of n = q^2 uniform points to the q x q grid, per q.
inline OracleTable oracle_scaling_2d(double a, const std::vector<std::size_t>& q_grid, std::size_t reps,
                                     std::uint64_t master_seed, std::size_t workers = 1) {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::oracle_2d;
  cfg.a = a;
  cfg.reps = reps;
  cfg.master_seed = master_seed;
  for (std::size_t q : q_grid) {
    if (q < 2) throw std::invalid_argument("oracle_scaling_2d: q must be >= 2 (ln n = 0 at q = 1)");
    cfg.n_grid.push_back(q * q);
  }
  OracleTable out;
  out.runs = run_experiment(cfg, workers);
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    const AggregateRow& agg = out.runs.aggregates[i];
    const double nd = static_cast<double>(agg.n);
    const double scale = std::pow(std::log(nd), a / 2.0) * std::pow(nd, 1.0 - a / 2.0);
    out.rows.push_back({q_grid[i], agg.n, agg.mean, agg.std_err, agg.mean / scale});
  }
  return out;
}

inline void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows, double a) {
  os << "q,n,a,mean,std_err,normalized\n";
  for (const OracleRow& r : rows)
    os << r.q << ',' << r.n << ',' << format_double(a) << ',' << format_double(r.mean) << ','
       << format_double(r.std_err) << ',' << format_double(r.normalized) << '\n';
}

}  // namespace mobsense

// Command-line front-end for the mobile-sensor displacement experiments.
//
// Exit codes: 0 success, 1 invalid arguments, 2 a verification failed
// (C&I violation with replay seed, or a numeric inequality check).

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobsense/mobsense.hpp"

namespace {

using namespace mobsense;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Flags {
  std::string experiment;
  std::size_t n = 0;
  std::vector<std::size_t> n_grid;
  double a = 1.0;
  double rho_n = 1.8;
  double s_n = 0.5;
  double r_2n = 1.2;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out;
  std::string config;
  std::size_t stride = 50;
  std::size_t n_max = 5000;
  std::size_t fit_n_max = std::numeric_limits<std::size_t>::max();
  std::size_t n_min = 0;
  std::string in;
  std::vector<std::size_t> q_grid{4, 8, 12, 16, 20};
  std::size_t q_max = 60;
  std::string check = "all";
  std::size_t samples = 10000;
  std::vector<double> positions;
  std::vector<std::string> points;
  double r = 0.0;
  double s = 0.0;
};

std::string format_fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void write_meta(const std::string& out, const ExperimentConfig& cfg) {
  std::ofstream os(out + ".meta.txt", std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + out + ".meta.txt' for writing");
  os << "generator = " << kGeneratorId << '\n'
     << "experiment = " << to_string(cfg.experiment) << '\n'
     << "master_seed = " << cfg.master_seed << '\n'
     << "a = " << format_double(cfg.a) << '\n'
     << "rho_n = " << format_double(cfg.rho_n) << '\n'
     << "s_n = " << format_double(cfg.s_n) << '\n'
     << "r_2n = " << format_double(cfg.r_2n) << '\n'
     << "reps = " << cfg.reps << '\n';
}

template <class Write>
void write_file(const std::string& path, Write&& write) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(os);
}

std::string with_suffix(const std::string& out, const std::string& suffix) {
  const std::string agg = aggregate_path(out);
  return agg.substr(0, agg.size() - std::string(".agg.csv").size()) + suffix;
}

// --- simulate ---------------------------------------------------------------

int run_simulate(const CLI::App& cmd, const Flags& f) {
  ExperimentConfig cfg;
  std::vector<std::string> seen;
  if (!f.config.empty()) cfg = load_config(f.config, cfg, &seen);
  auto from_config = [&](const char* key) { return std::find(seen.begin(), seen.end(), key) != seen.end(); };

  if (cmd.count("--experiment")) cfg.experiment = parse_experiment(f.experiment);
  if (cmd.count("--a")) cfg.a = f.a;
  if (cmd.count("--rho-n")) cfg.rho_n = f.rho_n;
  if (cmd.count("--s-n")) cfg.s_n = f.s_n;
  if (cmd.count("--r-2n")) cfg.r_2n = f.r_2n;
  if (cmd.count("--reps")) cfg.reps = f.reps;
  if (cmd.count("--out")) cfg.output = f.out;
  if (cmd.count("--seed"))
    cfg.master_seed = f.seed;
  else if (!from_config("master_seed"))
    throw UsageError("simulate: --seed is required (or master_seed in the config file)");
  if (!cmd.count("--experiment") && !from_config("experiment"))
    throw UsageError("simulate: --experiment is required (or experiment in the config file)");

  if (cmd.count("--stride")) {
    if (f.stride < 1) throw UsageError("--stride must be >= 1");
    const std::size_t top = cmd.count("--n") ? f.n : f.n_max;
    cfg.n_grid.clear();
    for (std::size_t n = f.stride; n <= top; n += f.stride) cfg.n_grid.push_back(n);
  } else if (cmd.count("--n-grid")) {
    cfg.n_grid = f.n_grid;
  } else if (cmd.count("--n")) {
    cfg.n_grid = {f.n};
  } else if (cfg.n_grid.empty()) {
    for (std::size_t n = f.stride; n <= f.n_max; n += f.stride) cfg.n_grid.push_back(n);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const ResultTable table = run_experiment(cfg, f.workers);
  if (!cfg.output.empty()) {
    write_result_files(cfg.output, table);
    write_meta(cfg.output, cfg);
  }
  std::cout << to_string(cfg.experiment) << " a=" << format_double(cfg.a) << " seed=" << cfg.master_seed << '\n';
  for (const AggregateRow& r : table.aggregates) {
    std::cout << "n=" << r.n << " reps=" << r.reps << " mean=" << format_sci(r.mean)
              << " std_err=" << format_sci(r.std_err);
    if (r.centerline) std::cout << " centerline=" << format_sci(*r.centerline);
    std::cout << '\n';
  }
  if (!cfg.output.empty())
    std::cout << "wrote " << cfg.output << " and " << aggregate_path(cfg.output) << '\n';
  return kExitOk;
}

// --- replicate-case2 --------------------------------------------------------

int run_replicate_case2(const CLI::App& cmd, const Flags& f) {
  if (!cmd.count("--seed")) throw UsageError("replicate-case2: --seed is required");
  if (!cmd.count("--a")) throw UsageError("replicate-case2: --a is required");
  const std::size_t reps = cmd.count("--reps") ? f.reps : 200;
  const Case2Table t = replicate_case2(f.a, f.seed, f.q_max, reps, 10, f.workers);
  if (!f.out.empty()) {
    write_result_files(f.out, t.runs);
    write_file(with_suffix(f.out, ".batches.csv"), [&](std::ostream& os) { write_case2_batches_csv(os, t.batches, f.a); });
  }
  for (const AggregateRow& r : t.runs.aggregates)
    std::cout << "n=" << r.n << " mean=" << format_sci(r.mean) << " centerline=" << format_sci(*r.centerline)
              << " ratio=" << format_fixed(r.mean / *r.centerline, 4) << '\n';
  return kExitOk;
}

// --- fit --------------------------------------------------------------------

int run_fit(const Flags& f) {
  if (f.in.empty()) throw UsageError("fit: --in is required");
  const FitResult fit = fit_scaling(read_aggregate_csv(f.in), f.n_min, f.fit_n_max);
  std::cout << "slope=" << format_fixed(fit.slope) << " intercept=" << format_fixed(fit.intercept)
            << " r_squared=" << format_fixed(fit.r_squared) << " n_range=[" << fit.n_min << "," << fit.n_max
            << "] points=" << fit.points << '\n';
  return kExitOk;
}

// --- oracle-2d --------------------------------------------------------------

int run_oracle(const CLI::App& cmd, const Flags& f) {
  if (!cmd.count("--seed")) throw UsageError("oracle-2d: --seed is required");
  const std::size_t reps = cmd.count("--reps") ? f.reps : 50;
  const OracleTable t = oracle_scaling_2d(f.a, f.q_grid, reps, f.seed, f.workers);
  if (!f.out.empty()) {
    write_result_files(f.out, t.runs);
    write_file(with_suffix(f.out, ".oracle.csv"), [&](std::ostream& os) { write_oracle_csv(os, t.rows, f.a); });
  }
  double lo = INFINITY, hi = 0.0;
  for (const OracleRow& r : t.rows) {
    std::cout << "q=" << r.q << " n=" << r.n << " mean=" << format_sci(r.mean) << " std_err=" << format_sci(r.std_err)
              << " normalized=" << format_fixed(r.normalized) << '\n';
    lo = std::min(lo, r.normalized);
    hi = std::max(hi, r.normalized);
  }
  std::cout << "normalized max/min=" << format_fixed(hi / lo, 4) << '\n';
  return kExitOk;
}

// --- verify-beta ------------------------------------------------------------

bool check_lemma_first(std::size_t n_max) {
  for (double a : {0.5, 1.0, 2.0, 4.0})
    for (std::size_t n = 2; n <= n_max; ++n)
      if (!verify_lemma_first(n, a)) {
        std::cout << "  violation at n=" << n << " a=" << a << '\n';
        return false;
      }
  return true;
}

bool check_prohorov(std::size_t samples, std::uint64_t seed) {
  SplitMix64 rng(SeedSpec{seed, 0});
  for (std::size_t t = 0; t < samples; ++t) {
    const std::uint64_t n = 1 + rng.below(10000);
    const double x = rng.uniform() * (1.0 - 1.0 / static_cast<double>(n));
    const std::uint64_t j = rng.below(n + 1);
    if (static_cast<double>(n) * (1.0 - x) < 1.0) continue;
    if (!verify_prohorov(n, j, x)) {
      std::cout << "  violation at n=" << n << " j=" << j << " x=" << format_double(x) << '\n';
      return false;
    }
  }
  return true;
}

bool check_beta_identity() {
  double worst = 0.0;
  for (std::uint64_t c : {1, 2, 3, 7, 20, 100, 1000, 5000})
    for (std::uint64_t d : {1, 2, 5, 50, 1000, 5000})
      for (double z : {0.001, 0.1, 0.4, 0.5, 0.77, 0.999}) {
        if (c + d - 1 > 10000) continue;
        worst = std::max(worst, std::abs(1.0 - incomplete_beta({c, d}, z) - binomial_lower_sum({c, d}, z)));
      }
  std::cout << "  max |1 - I - sum| = " << format_sci(worst) << '\n';
  return worst < 1e-10;
}

bool check_pdf_normalization() {
  double worst = 0.0;
  for (std::uint64_t c : {1, 2, 5, 30, 500, 5000})
    for (std::uint64_t d : {1, 3, 40, 700, 4999}) {
      if (c + d > 10000) continue;
      const BetaParams p{c, d};
      const double cd = static_cast<double>(c), dd = static_cast<double>(d);
      const double mean = cd / (cd + dd);
      const double sd = std::sqrt(cd * dd / ((cd + dd) * (cd + dd) * (cd + dd + 1.0)));
      std::vector<double> cuts;
      for (double k : {-40.0, -20.0, -10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0}) cuts.push_back(mean + k * sd);
      const double total = detail::integrate_split([&](double t) { return beta_pdf(p, t); }, 0.0, 1.0, cuts);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  std::cout << "  max |integral - 1| = " << format_sci(worst) << '\n';
  return worst < 1e-8;
}

bool check_series_identity() {
  bool ok = true;
  for (double a : {0.5, 1.0, 1.5, 2.5, 3.0, 3.3}) {
    const SeriesIdentityCheck c = verify_series_integral_identity(a);
    std::cout << "  a=" << a << " series=" << format_double(c.series_side) << " closed=" << format_double(c.closed_form)
              << " rel_err=" << format_sci(c.relative_error) << '\n';
    ok = ok && c.ok;
  }
  return ok;
}

bool check_moments() {
  bool ok = true;
  for (double a : {1.0, 2.0}) {
    std::vector<double> peak, sum;
    for (std::uint64_t n : {100, 1000}) {
      const double nd = static_cast<double>(n);
      peak.push_back(std::pow(nd, a) * max_positive_part_moment(n, a, 1.5 / nd, MomentKind::upper));
      sum.push_back(std::pow(nd, a - 1.0) * lemma_sum_bound(n, a, 1.5 / nd, MomentKind::upper));
    }
    const double pr = std::max(peak[0], peak[1]) / std::min(peak[0], peak[1]);
    const double sr = std::max(sum[0], sum[1]) / std::min(sum[0], sum[1]);
    std::cout << "  a=" << a << " peak ratio=" << format_fixed(pr, 4) << " sum ratio=" << format_fixed(sr, 4) << '\n';
    ok = ok && pr < 2.0 && sr < 2.0;
  }
  return ok;
}

int run_verify_beta(const CLI::App& cmd, const Flags& f) {
  static const std::vector<std::string> kChecks{"lemma_first", "prohorov", "beta_identity", "pdf_normalization",
                                                "series_identity", "moments"};
  std::vector<std::string> selected;
  if (f.check == "all")
    selected = kChecks;
  else if (std::find(kChecks.begin(), kChecks.end(), f.check) != kChecks.end())
    selected = {f.check};
  else
    throw UsageError("verify-beta: unknown --check '" + f.check + "'");
  const bool needs_seed = std::find(selected.begin(), selected.end(), "prohorov") != selected.end();
  if (needs_seed && !cmd.count("--seed")) throw UsageError("verify-beta: the prohorov check needs --seed");

  bool all = true;
  for (const std::string& name : selected) {
    bool ok = false;
    if (name == "lemma_first") ok = check_lemma_first(f.n_max);
    else if (name == "prohorov") ok = check_prohorov(f.samples, f.seed);
    else if (name == "beta_identity") ok = check_beta_identity();
    else if (name == "pdf_normalization") ok = check_pdf_normalization();
    else if (name == "series_identity") ok = check_series_identity();
    else if (name == "moments") ok = check_moments();
    std::cout << name << ": " << (ok ? "true" : "false") << '\n';
    all = all && ok;
  }
  return all ? kExitOk : kExitVerification;
}

// --- verify-ci --------------------------------------------------------------

int report_verdict(const CandIVerdict& v) {
  std::cout << "ci_verified: " << (v.ok ? "true" : "false") << '\n';
  if (!v.ok) std::cout << v.message << '\n';
  return v.ok ? kExitOk : kExitVerification;
}

int run_verify_ci(const CLI::App& cmd, const Flags& f) {
  if (cmd.count("--positions") || cmd.count("--points")) {
    if (!cmd.count("--r")) throw UsageError("verify-ci: --r is required with explicit positions");
    if (cmd.count("--positions")) {
      std::vector<double> xs = f.positions;
      std::sort(xs.begin(), xs.end());
      return report_verdict(verify_ci_1d(Placement1D(xs), {1, f.r, f.s}));
    }
    std::vector<Point2> pts;
    for (const std::string& p : f.points) {
      const auto colon = p.find(':');
      if (colon == std::string::npos) throw UsageError("verify-ci: points are written x:y");
      pts.push_back({std::stod(p.substr(0, colon)), std::stod(p.substr(colon + 1))});
    }
    return report_verdict(verify_ci_2d(Placement2D(pts), {2, f.r, f.s}));
  }

  if (!cmd.count("--seed")) throw UsageError("verify-ci: --seed is required for simulated trials");
  ExperimentConfig cfg;
  cfg.experiment = cmd.count("--experiment") ? parse_experiment(f.experiment) : Experiment::cv1_1d;
  if (cfg.experiment != Experiment::cv1_1d && cfg.experiment != Experiment::cv2_2d)
    throw UsageError("verify-ci: --experiment must be cv1_1d or cv2_2d");
  cfg.n_grid = cmd.count("--n-grid") ? f.n_grid : std::vector<std::size_t>{cmd.count("--n") ? f.n : 1000};
  cfg.a = f.a;
  cfg.s_n = f.s_n;
  cfg.r_2n = f.r_2n;
  cfg.reps = f.reps;
  cfg.master_seed = f.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ResultTable t = run_experiment(cfg, f.workers);
  std::cout << "ci_verified: true (" << t.trials.size() << " trials)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile sensor displacement experiments: simulation, fits and numeric checks."};
  app.require_subcommand(1);
  Flags f;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", f.seed, "Master seed (64-bit); all randomness derives from it"); };
  auto add_workers = [&](CLI::App* c) { c->add_option("--workers", f.workers, "Worker threads; output does not depend on it")->check(CLI::PositiveNumber); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", f.out, "Per-trial CSV path; aggregates go to <stem>.agg.csv"); };
  auto add_rates = [&](CLI::App* c) {
    c->add_option("--rho-n", f.rho_n, "rho * n (MV pull distance, or rate of the upper moment)");
    c->add_option("--s-n", f.s_n, "s * n (interference distance relative to 1/n, or 1/floor(sqrt n) in 2D)");
    c->add_option("--r-2n", f.r_2n, "r * 2n (sensing radius relative to 1/(2n), or 1/(2 floor(sqrt n)) in 2D)");
  };

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment over an n grid");
  sim->add_option("--experiment", f.experiment, "anchors_1d | mv_1d | cv1_1d | cv2_2d | oracle_2d | beta_lemmas");
  sim->add_option("--n", f.n, "Single n; with --stride, the top of the grid")->check(CLI::PositiveNumber);
  sim->add_option("--n-grid", f.n_grid, "Comma-separated ascending n values")->delimiter(',');
  sim->add_option("--stride", f.stride, "Grid {stride, 2*stride, ..., n} (default 50 up to 5000)");
  sim->add_option("--n-max", f.n_max, "Top of the default strided grid");
  sim->add_option("--a", f.a, "Cost exponent a > 0");
  add_rates(sim);
  sim->add_option("--reps", f.reps, "Trials per n")->check(CLI::PositiveNumber);
  add_seed(sim);
  add_workers(sim);
  add_out(sim);
  sim->add_option("--config", f.config, "key = value config file; flags override it")->check(CLI::ExistingFile);

  auto* rep = app.add_subcommand("replicate-case2", "Anchor cost at n = q^2, q = 1..q_max, with batch means");
  rep->add_option("--a", f.a, "Cost exponent a > 0");
  rep->add_option("--q-max", f.q_max, "Largest q (default 60)")->check(CLI::PositiveNumber);
  rep->add_option("--reps", f.reps, "Trials per n, a multiple of 10 (default 200)")->check(CLI::PositiveNumber);
  add_seed(rep);
  add_workers(rep);
  add_out(rep);

  auto* fit = app.add_subcommand("fit", "Log-log least squares of mean against n from an aggregate CSV");
  fit->add_option("--in", f.in, "Aggregate CSV (.agg.csv)")->check(CLI::ExistingFile);
  fit->add_option("--n-min", f.n_min, "Smallest n included");
  fit->add_option("--n-max", f.fit_n_max, "Largest n included");

  auto* ora = app.add_subcommand("oracle-2d", "Exact matching of n = q^2 uniform points to the q x q grid");
  ora->add_option("--a", f.a, "Cost exponent a > 0");
  ora->add_option("--q-grid", f.q_grid, "Comma-separated q values (default 4,8,12,16,20)")->delimiter(',');
  ora->add_option("--reps", f.reps, "Trials per q (default 50)")->check(CLI::PositiveNumber);
  add_seed(ora);
  add_workers(ora);
  add_out(ora);

  auto* vb = app.add_subcommand("verify-beta", "Numeric checks of the Beta/order-statistic estimates");
  vb->add_option("--check", f.check,
                 "all | lemma_first | prohorov | beta_identity | pdf_normalization | series_identity | moments");
  vb->add_option("--n-max", f.n_max, "Upper end of the lemma_first scan n = 2..n_max (default 5000)");
  vb->add_option("--samples", f.samples, "Random admissible triples for prohorov (default 10000)");
  add_seed(vb);

  auto* vc = app.add_subcommand("verify-ci", "Check coverage and interference of given positions or simulated runs");
  vc->add_option("--positions", f.positions, "Comma-separated 1D positions in [0,1]")->delimiter(',');
  vc->add_option("--points", f.points, "Comma-separated 2D points written x:y")->delimiter(',');
  vc->add_option("--r", f.r, "Sensing radius for explicit positions");
  vc->add_option("--s", f.s, "Interference distance for explicit positions");
  vc->add_option("--experiment", f.experiment, "cv1_1d | cv2_2d for simulated trials (default cv1_1d)");
  vc->add_option("--n", f.n, "n for simulated trials (default 1000)")->check(CLI::PositiveNumber);
  vc->add_option("--n-grid", f.n_grid, "Comma-separated n values for simulated trials")->delimiter(',');
  vc->add_option("--a", f.a, "Cost exponent a > 0");
  add_rates(vc);
  vc->add_option("--reps", f.reps, "Trials per n")->check(CLI::PositiveNumber);
  add_seed(vc);
  add_workers(vc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    if (app.get_subcommands().empty()) {
      std::cout << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    }
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return run_simulate(*sim, f);
    if (rep->parsed()) return run_replicate_case2(*rep, f);
    if (fit->parsed()) return run_fit(f);
    if (ora->parsed()) return run_oracle(*ora, f);
    if (vb->parsed()) return run_verify_beta(*vb, f);
    if (vc->parsed()) return run_verify_ci(*vc, f);
  } catch (const CandIViolation& e) {
    std::cerr << "C&I violation: " << e.what() << "\nreplay: --seed " << e.seed().master_seed << " (stream "
              << e.seed().stream_id << ", n=" << e.n() << ", trial=" << e.trial() << ")\n";
    return kExitVerification;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

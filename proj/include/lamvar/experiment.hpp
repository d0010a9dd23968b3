#pragma once

// Experiment runner behind the lamvar command line tool. run() is pure: it
// returns the CSV text, the JSON summary and an exit code, and never touches
// the filesystem except to read inputs. write_outputs() does the writing.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 a demo whose
// expected behaviour did not show up.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamvar/constructions.hpp"
#include "lamvar/io.hpp"
#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"
#include "lamvar/sequences.hpp"
#include "lamvar/variation.hpp"

namespace lamvar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitPhenomenon = 3;

struct LevelRange {
  int lo = 4;
  int hi = 10;  ///< inclusive; hi < lo is an empty range
  bool empty() const { return hi < lo; }
};

/// "LO:HI" or a single level "N".
inline LevelRange parse_level_range(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("--levels: expected N or LO:HI, got '" + text + "'");
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int n = parse_int(text);
    return {n, n};
  }
  return {parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
}

struct ExperimentConfig {
  std::string command;
  std::optional<std::string> function_path;
  std::optional<std::string> sequence_path;
  std::optional<std::string> out_path;
  double p = 2.0;
  double alpha = 0.75;
  int delta_depth = 8;
  int refine = 1;
  LevelRange levels{};
  unsigned blocks = 20;
  std::uint64_t seed = 1;
  double s = 2.0;                 ///< wang-demo family exponent
  std::uint64_t terms = 1000000;  ///< perlman-demo length
  int instances = 500;            ///< hardy-demo draws per (beta, r)
  int h_samples = 256;            ///< shift grid for the L^p modulus
};

struct RunResult {
  int exit_code = kExitOk;
  std::string csv;
  io::json summary = io::json::object();
  std::string message;  ///< empty on success
};

/// A configuration problem; the message starts with the offending flag.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline PiecewiseLinearPeriodic load_function(const ExperimentConfig& c) {
  if (!c.function_path) throw ConfigError("--function: required for command '" + c.command + "'");
  try {
    return io::function_from_json(io::read_json_file(*c.function_path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--function: ") + e.what());
  }
}

inline LambdaSequence load_sequence(const ExperimentConfig& c) {
  if (!c.sequence_path) throw ConfigError("--sequence: required for command '" + c.command + "'");
  try {
    return io::sequence_from_json(io::read_json_file(*c.sequence_path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--sequence: ") + e.what());
  }
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

inline void check_p_alpha(const ExperimentConfig& c) {
  require(c.p > 1.0 && std::isfinite(c.p), "--p: must be finite and > 1");
  require(c.alpha > 1.0 / c.p && c.alpha <= 1.0, "--alpha: must lie in (1/p, 1]");
}

inline double delta_at(int j) { return std::exp2(-static_cast<double>(j)); }

inline RunResult run_variation(const ExperimentConfig& c) {
  require(c.p >= 1.0 && std::isfinite(c.p), "--p: must be finite and >= 1");
  require(c.delta_depth >= 0 && c.delta_depth <= 30, "--delta-depth: must lie in [0, 30]");
  require(c.refine >= 0 && c.refine <= 64, "--refine: must lie in [0, 64]");
  require(c.alpha > 0.0 && c.alpha <= 1.0, "--alpha: must lie in (0, 1]");
  require(c.h_samples >= 1, "--h-samples: must be >= 1");
  const auto f = load_function(c);
  std::optional<LambdaSequence> lam;
  if (c.sequence_path) lam = load_sequence(c);

  io::CsvWriter csv("functional", c.command, {"functional", "p", "alpha", "delta", "value", "refinement"});
  RunResult out;
  auto& sm = out.summary;
  const double vp = p_variation(f, c.p);
  csv.row({"p_variation", c.p, "", "", vp, ""});
  sm["p_variation"] = vp;
  if (lam) {
    const double vl = lambda_variation(f, *lam);
    csv.row({"lambda_variation", "", "", "", vl, ""});
    sm["lambda_variation"] = vl;
  }
  csv.row({"sup_norm", "", "", "", sup_norm(f), ""});
  csv.row({"derivative_lp_norm", c.p, "", "", derivative_lp_norm(f, c.p), ""});
  if (c.p > 1.0) {
    for (int j = 0; j <= c.delta_depth; ++j) {
      const double d = delta_at(j);
      csv.row({"modulus_p_continuity", c.p, "", d,
               modulus_p_continuity(f, c.p, ModulusQuery{d, c.refine, CutPolicy::global_maximum}), c.refine});
    }
  }
  for (int j = 0; j <= c.delta_depth; ++j) {
    const double d = delta_at(j);
    csv.row({"lp_modulus", c.p, "", d, lp_modulus(f, c.p, d, c.h_samples), ""});
  }
  if (c.delta_depth >= 1 && c.p > 1.0) {
    const double ln = lip_norm(f, c.p, c.alpha, c.delta_depth, c.h_samples).value;
    csv.row({"lip_norm", c.p, c.alpha, "", ln, ""});
    sm["lip_norm"] = ln;
    if (c.alpha > 1.0 / c.p) {
      const double pr = p_cont_ratio_norm(f, c.p, c.alpha, c.delta_depth, c.refine).value;
      csv.row({"p_cont_ratio_norm", c.p, c.alpha, "", pr, c.refine});
      sm["p_cont_ratio_norm"] = pr;
    }
  }
  sm["breakpoints"] = f.size();
  sm["rows"] = csv.rows();
  out.csv = csv.str();
  return out;
}

inline io::CsvWriter series_writer(const std::string& command) {
  return io::CsvWriter("series", command, {"series", "n", "inner", "term", "partial_sum"});
}

inline void emit_series(io::CsvWriter& csv, const CriterionReport& crit, const WangReport& wang) {
  for (const auto& b : crit.blocks) csv.row({"criterion", b.n, b.inner, b.term, crit.partial_sums[b.n]});
  for (const auto& b : wang.blocks) csv.row({"wang", b.n, b.block_sum, b.block_sum, wang.partial_sums[b.n]});
}

inline RunResult run_criterion(const ExperimentConfig& c) {
  check_p_alpha(c);
  require(c.alpha < 1.0, "--alpha: must be < 1 for the Wang series");
  require(c.blocks <= 60, "--blocks: must be <= 60");
  const auto lam = load_sequence(c);
  if (!lam.is_named()) {
    require(lam.available_terms().value() >= (std::size_t{2} << c.blocks),
            "--blocks: explicit sequence has " + std::to_string(*lam.available_terms()) + " terms, " +
                std::to_string(std::size_t{2} << c.blocks) + " needed");
  }
  const auto crit = criterion_partial_sums(lam, c.p, c.alpha, c.blocks);
  const auto wang = wang_partial_sums(lam, c.alpha, c.blocks + 1);
  auto csv = series_writer(c.command);
  emit_series(csv, crit, wang);

  RunResult out;
  auto& sm = out.summary;
  const auto& ex = crit.exponents;
  sm["exponents"] = {{"p", ex.p}, {"alpha", ex.alpha}, {"p_conj", ex.p_conj}, {"r", ex.r}, {"r_conj", ex.r_conj}};
  sm["verdict"] = to_string(crit.verdict);
  sm["wang"] = to_string(wang.verdict);
  sm["class_S"] = to_string(in_class_s(lam));
  sm["class_S_p_conj"] = to_string(in_class_sq(lam, ex.p_conj));
  sm["criterion_partial_sum"] = crit.partial_sums.back();
  sm["wang_partial_sum"] = wang.partial_sums.back();
  out.csv = csv.str();
  return out;
}

struct LevelRow {
  int level;
  double criterion_root;
  double lambda_variation;
  double analytic_lower_bound;
  double p_cont_ratio;
};

inline std::vector<LevelRow> sharpness_rows(const LambdaSequence& lam, const ExperimentConfig& c) {
  std::vector<LevelRow> rows;
  if (c.levels.empty()) return rows;
  require(c.levels.lo >= 1 && c.levels.hi <= kMaxWitnessLevels, "--levels: must lie within 1:12");
  require(c.refine >= 0 && c.refine <= 64, "--refine: must lie in [0, 64]");
  const double rc = embedding_exponents(c.p, c.alpha).r_conj;
  for (int level = c.levels.lo; level <= c.levels.hi; ++level) {
    WitnessSpec spec{.lam = lam};
    spec.p = c.p;
    spec.alpha = c.alpha;
    spec.levels = level;
    spec.refinement = c.refine;
    const auto w = extremal_function(spec);
    const auto& r = w.report;
    rows.push_back({level, std::pow(r.criterion_partial, 1.0 / rc), r.measured_lambda_variation,
                    r.analytic_lower_bound, r.p_cont_ratio ? r.p_cont_ratio->value : 0.0});
  }
  return rows;
}

inline RunResult run_sharpness(const ExperimentConfig& c) {
  check_p_alpha(c);
  require(c.alpha < 1.0, "--alpha: must be < 1");
  const auto lam = load_sequence(c);
  const auto rows = sharpness_rows(lam, c);
  io::CsvWriter csv("sharpness", c.command,
                    {"level", "criterion_root", "lambda_variation", "analytic_lower_bound", "p_cont_ratio",
                     "variation_quotient", "embedding_quotient"});
  for (const auto& r : rows) {
    csv.row({r.level, r.criterion_root, r.lambda_variation, r.analytic_lower_bound, r.p_cont_ratio,
             r.lambda_variation / r.criterion_root, r.lambda_variation / (r.p_cont_ratio * r.criterion_root)});
  }
  RunResult out;
  out.summary["levels"] = rows.size();
  out.summary["criterion_verdict"] = to_string(criterion_verdict(lam, c.p, c.alpha));
  if (!rows.empty()) {
    out.summary["first_p_cont_ratio"] = rows.front().p_cont_ratio;
    out.summary["last_p_cont_ratio"] = rows.back().p_cont_ratio;
  }
  out.csv = csv.str();
  return out;
}

inline io::CsvWriter long_writer(const std::string& command) {
  return io::CsvWriter("long", command, {"section", "index", "quantity", "value"});
}

inline RunResult run_wang_demo(const ExperimentConfig& c) {
  check_p_alpha(c);
  require(c.alpha < 1.0, "--alpha: must be < 1");
  require(c.blocks >= 1 && c.blocks <= 60, "--blocks: must lie in [1, 60]");
  const auto [lo, hi] = wang_gap_window(c.p, c.alpha);
  require(c.s > lo && c.s < hi, "--s: must lie in (" + io::format_double(lo) + ", " + io::format_double(hi) + ")");
  const auto lam = wang_gap_family(c.p, c.alpha, c.s);
  const auto crit = criterion_partial_sums(lam, c.p, c.alpha, c.blocks);
  const auto wang = wang_partial_sums(lam, c.alpha, c.blocks + 1);
  const auto rows = sharpness_rows(lam, c);

  auto csv = long_writer(c.command);
  for (const auto& b : crit.blocks) csv.row({"criterion", b.n, "partial_sum", crit.partial_sums[b.n]});
  for (const auto& b : wang.blocks) csv.row({"wang", b.n, "partial_sum", wang.partial_sums[b.n]});
  for (const auto& r : rows) {
    csv.row({"witness", r.level, "criterion_root", r.criterion_root});
    csv.row({"witness", r.level, "lambda_variation", r.lambda_variation});
    csv.row({"witness", r.level, "p_cont_ratio", r.p_cont_ratio});
  }

  RunResult out;
  auto& sm = out.summary;
  sm["s"] = c.s;
  sm["window"] = {lo, hi};
  sm["wang"] = to_string(wang.verdict);
  sm["criterion"] = to_string(crit.verdict);
  // Last ten blocks: what the convergent series still adds against the
  // divergent one.
  const unsigned first = c.blocks >= 10 ? c.blocks - 10 : 0;
  sm["wang_tail_last_blocks"] = wang.partial_sums[c.blocks] - wang.partial_sums[first];
  sm["criterion_increase_last_blocks"] = crit.partial_sums[c.blocks] - crit.partial_sums[first];

  bool increasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) increasing &= rows[i].lambda_variation > rows[i - 1].lambda_variation;
  const bool bounded = rows.empty() || rows.back().p_cont_ratio <= 2.0 * rows.front().p_cont_ratio;
  sm["witness_variation_increasing"] = increasing;
  sm["witness_ratio_bounded"] = bounded;
  out.csv = csv.str();
  if (wang.verdict != SeriesVerdict::converges || crit.verdict != SeriesVerdict::diverges || !increasing ||
      !bounded) {
    out.exit_code = kExitPhenomenon;
    out.message = "wang-demo: expected a convergent Wang series, a divergent criterion and an unbounded witness";
  }
  return out;
}

inline RunResult run_perlman_demo(const ExperimentConfig& c) {
  require(c.p > 1.0 && std::isfinite(c.p), "--p: must be finite and > 1");
  require(c.terms >= 10 && c.terms <= 50000000, "--terms: must lie in [10, 5e7]");
  const double pc = conjugate(c.p);
  std::vector<double> d(c.terms);
  for (std::uint64_t n = 1; n <= c.terms; ++n) d[n - 1] = std::pow(static_cast<double>(n), -1.0 / c.p);
  const auto lam = perlman_witness(d, c.p);

  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t n = 10; n <= c.terms; n *= 10) checkpoints.push_back(n);
  if (checkpoints.back() != c.terms) checkpoints.push_back(c.terms);

  auto csv = long_writer(c.command);
  ::lamvar::detail::CompensatedSum inv, weighted;
  std::vector<double> inv_at, weighted_at;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= c.terms; ++n) {
    const double l = lam.term(n);
    inv.add(std::pow(l, -pc));
    weighted.add(d[n - 1] / l);
    if (n == checkpoints[next]) {
      csv.row({"partial", n, "inverse_power_sum", inv.sum});
      csv.row({"partial", n, "weighted_sum", weighted.sum});
      inv_at.push_back(inv.sum);
      weighted_at.push_back(weighted.sum);
      ++next;
    }
  }

  RunResult out;
  auto& sm = out.summary;
  sm["p"] = c.p;
  sm["terms"] = c.terms;
  sm["inverse_power_sum"] = inv.sum;
  sm["weighted_sum"] = weighted.sum;
  const std::size_t k = inv_at.size();
  bool ok = k >= 2;
  if (ok) {
    const double inv_inc = inv_at[k - 1] - inv_at[k - 2];
    const double w_inc = weighted_at[k - 1] - weighted_at[k - 2];
    sm["inverse_power_increase_last"] = inv_inc;
    sm["weighted_increase_last"] = w_inc;
    // The convergent sum flattens decade over decade; the divergent one keeps
    // gaining more than the convergent one over the last stretch.
    for (std::size_t i = 2; i < k; ++i) ok &= inv_at[i] - inv_at[i - 1] <= inv_at[i - 1] - inv_at[i - 2];
    ok &= w_inc > inv_inc;
  }
  sm["phenomenon"] = ok;
  out.csv = csv.str();
  if (!ok) {
    out.exit_code = kExitPhenomenon;
    out.message = "perlman-demo: partial sums did not separate";
  }
  return out;
}

/// lhs <= (1/(1 - 2^-beta) + 2^beta) rhs for any increasing nu with nu_0 = 1,
/// by subadditivity of t^(1/r) over the blocks.
inline double hardy_explicit_constant(double beta) {
  return 1.0 / (1.0 - std::exp2(-beta)) + std::exp2(beta);
}

inline RunResult run_hardy_demo(const ExperimentConfig& c) {
  require(c.instances >= 1 && c.instances <= 1000000, "--instances: must lie in [1, 1e6]");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> length(1, 64);
  auto csv = long_writer(c.command);
  RunResult out;
  bool ok = true;
  io::json constants = io::json::array();
  for (double beta : {0.25, 0.5, 1.0}) {
    for (double r : {1.5, 2.0, 3.0}) {
      double worst = 0.0;
      int used = 0;
      for (int i = 0; i < c.instances; ++i) {
        std::vector<double> a(static_cast<std::size_t>(length(rng)));
        for (auto& v : a) v = unit(rng) < 0.3 ? 0.0 : unit(rng);
        std::vector<double> nu{1.0};
        while (nu.back() < static_cast<double>(a.size())) nu.push_back(nu.back() * (1.1 + 2.9 * unit(rng)));
        const auto sides = hardy_two_sides(beta, r, a, nu);
        if (sides.rhs <= 0.0) continue;
        worst = std::max(worst, sides.lhs / sides.rhs);
        ++used;
      }
      const double bound = hardy_explicit_constant(beta);
      csv.row({"hardy", used, "beta", beta});
      csv.row({"hardy", used, "r", r});
      csv.row({"hardy", used, "max_ratio", worst});
      csv.row({"hardy", used, "explicit_bound", bound});
      constants.push_back({{"beta", beta}, {"r", r}, {"max_ratio", worst}, {"instances", used}});
      ok &= worst <= bound * (1.0 + 1e-12);
    }
  }
  out.summary["seed"] = c.seed;
  out.summary["constants"] = constants;
  out.summary["within_explicit_bound"] = ok;
  out.csv = csv.str();
  if (!ok) {
    out.exit_code = kExitPhenomenon;
    out.message = "hardy-demo: a ratio exceeded the explicit constant";
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names{"variation", "criterion", "sharpness",
                                              "wang-demo", "perlman-demo", "hardy-demo"};
  return names;
}

inline RunResult run(const ExperimentConfig& config) {
  RunResult out;
  try {
    const auto& c = config;
    if (c.command == "variation") out = detail::run_variation(c);
    else if (c.command == "criterion") out = detail::run_criterion(c);
    else if (c.command == "sharpness") out = detail::run_sharpness(c);
    else if (c.command == "wang-demo") out = detail::run_wang_demo(c);
    else if (c.command == "perlman-demo") out = detail::run_perlman_demo(c);
    else if (c.command == "hardy-demo") out = detail::run_hardy_demo(c);
    else throw ConfigError("--command: unknown value '" + c.command + "'");
  } catch (const ConfigError& e) {
    return {kExitInvalid, "", io::json::object(), e.what()};
  } catch (const std::invalid_argument& e) {
    return {kExitInvalid, "", io::json::object(), config.command + ": " + e.what()};
  } catch (const std::out_of_range& e) {
    return {kExitInvalid, "", io::json::object(), config.command + ": " + e.what()};
  } catch (const std::domain_error& e) {
    return {kExitInvalid, "", io::json::object(), config.command + ": " + e.what()};
  }
  out.summary["command"] = config.command;
  out.summary["exit_code"] = out.exit_code;
  return out;
}

/// CSV to --out (stdout without one) and the summary to <out>.json (stderr
/// without one). Returns the exit code to hand back to the shell.
inline int write_outputs(const ExperimentConfig& config, const RunResult& result, std::ostream& out,
                         std::ostream& err) {
  if (!result.message.empty()) err << result.message << '\n';
  if (result.exit_code == kExitInvalid) return result.exit_code;
  const std::string summary = result.summary.dump(2) + "\n";
  if (config.out_path) {
    io::write_text_file(*config.out_path, result.csv);
    io::write_text_file(*config.out_path + ".json", summary);
  } else {
    out << result.csv;
    err << summary;
  }
  return result.exit_code;
}

}  // namespace lamvar

#pragma once

/**
 * @file constructions.hpp
 * @brief Explicit functions and weight sequences: triangle combs, the
 * sharpness witness g = sum_n F_n, the duality choice of level weights, the
 * numerical check of the main Lambda-variation estimate, the witness sequence
 * for V_p as an intersection of Lambda BV classes, and the family separating
 * Wang's condition from the embedding criterion.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"
#include "lamvar/sequences.hpp"
#include "lamvar/variation.hpp"

namespace lamvar {

struct TriangleCombSpec {
  Interval support;
  std::size_t count = 1;        ///< N
  std::vector<double> heights;  ///< H_0 .. H_(N-1)
};

/// N isosceles triangles of heights H_j on equal bases h = |I|/N, zero
/// outside I. Nodes a + jh carry 0, apexes a + (j + 1/2)h carry H_j.
inline PiecewiseLinearPeriodic triangle_comb(const TriangleCombSpec& spec) {
  validate_interval(spec.support);
  const std::size_t n = spec.count;
  if (n == 0) throw std::invalid_argument("triangle_comb: N must be positive");
  if (spec.heights.size() != n) throw std::invalid_argument("triangle_comb: need exactly N heights");
  for (double h : spec.heights) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw std::invalid_argument("triangle_comb: negative height");
  }
  const double a = spec.support.a, len = spec.support.length;
  const auto nd = static_cast<double>(n);
  auto place = [](double x) { return x >= 1.0 ? x - 1.0 : x; };
  std::vector<Breakpoint> pts;
  pts.reserve(2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jd = static_cast<double>(j);
    pts.push_back({place(a + len * (jd / nd)), 0.0});
    pts.push_back({place(a + len * ((jd + 0.5) / nd)), spec.heights[j]});
  }
  if (len < 1.0) pts.push_back({place(a + len), 0.0});
  return PiecewiseLinearPeriodic::from_points(std::move(pts));
}

/// Level weights delta_n = u_n^r with u the l^r' dual extremizer of L, so that
/// sum delta_n = 1 and sum delta_n^(alpha-1/p) L_n = ||L||_r'.
inline std::vector<double> duality_weights(const std::vector<double>& block_norms, double p, double alpha) {
  const auto ex = embedding_exponents(p, alpha);
  const auto u = dual_extremizer(block_norms, ex.r_conj);
  std::vector<double> delta;
  delta.reserve(u.size());
  double total = 0.0;
  for (double v : u) {
    delta.push_back(std::pow(v, ex.r));
    total += delta.back();
  }
  for (auto& d : delta) d /= total;
  return delta;
}

inline constexpr int kMaxWitnessLevels = 12;

struct WitnessSpec {
  LambdaSequence lam;
  double p = 2.0;
  double alpha = 0.75;
  int levels = 4;
  std::optional<std::vector<double>> delta{};  ///< nullopt: duality_weights
  bool measure_modulus = true;
  int dyadic_depth = 0;  ///< 0: resolve the finest triangle base
  int refinement = 1;
};

struct WitnessReport {
  int levels = 0;
  std::vector<double> delta;        ///< delta_n, n = 1..levels
  std::vector<double> beta;         ///< regularized envelope of delta
  double beta_sum = 0.0;            ///< L
  std::vector<double> interval_lengths;  ///< |J_n| = beta_n / L
  std::vector<double> s;            ///< S_n
  std::vector<double> block_norms;  ///< (sum_{k=2^n}^{2^(n+1)} (k^(alpha-1/p) lambda_k)^(-p'))^(1/p')
  std::vector<double> level_lambda_sums;  ///< sum_k H_k^(n) / lambda_k
  std::vector<double> level_height_power_sums;  ///< sum_k (H_k^(n))^p
  double criterion_partial = 0.0;   ///< sum_{n=1}^{levels} block_norms[n]^r'
  double analytic_lower_bound = 0.0;
  double measured_lambda_variation = 0.0;
  std::optional<RatioNormReport> p_cont_ratio;
};

struct Witness {
  PiecewiseLinearPeriodic g;
  WitnessReport report;
};

/// g = sum_{n=1}^{levels} F(J_n, 2^n, H_n), with beta from regularize_sequence
/// at theta = 3/2, gamma = 1 and heights
/// H_k^(n) = (2^-n beta_n)^(alpha-1/p) lambda_k^(-1/(p-1)) S_n^(-p'/p).
inline Witness extremal_function(const WitnessSpec& spec) {
  const auto ex = embedding_exponents(spec.p, spec.alpha);
  if (spec.levels < 1 || spec.levels > kMaxWitnessLevels) {
    throw std::invalid_argument("extremal_function: levels must lie in [1, 12]");
  }
  const auto levels = static_cast<unsigned>(spec.levels);
  const double a = spec.alpha - 1.0 / spec.p;
  // Lambda-variation pairs every arc with a weight: 2 per triangle.
  spec.lam.require_terms((std::size_t{2} << (levels + 1)) - 4);

  WitnessReport rep;
  rep.levels = spec.levels;
  const auto crit = criterion_partial_sums(spec.lam, spec.p, spec.alpha, levels);
  for (unsigned n = 1; n <= levels; ++n) {
    rep.block_norms.push_back(std::pow(crit.blocks[n].inner, 1.0 / ex.p_conj));
    rep.criterion_partial += crit.blocks[n].term;
  }

  if (spec.delta) {
    rep.delta = *spec.delta;
    if (rep.delta.size() != levels) throw std::invalid_argument("extremal_function: need one delta per level");
    double total = 0.0;
    for (double d : rep.delta) {
      if (!(d > 0.0)) throw std::invalid_argument("extremal_function: delta_n must be positive");
      total += d;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("extremal_function: sum of delta exceeds 1");
  } else {
    rep.delta = duality_weights(rep.block_norms, spec.p, spec.alpha);
  }

  rep.beta = regularize_sequence(rep.delta, 1.5, 1.0);
  for (double b : rep.beta) rep.beta_sum += b;

  std::vector<PiecewiseLinearPeriodic> combs;
  combs.reserve(levels);
  double start = 0.0;
  for (unsigned n = 1; n <= levels; ++n) {
    const double beta = rep.beta[n - 1];
    const double len = n == levels ? 1.0 - start : beta / rep.beta_sum;
    rep.interval_lengths.push_back(len);
    const std::uint64_t lo = std::uint64_t{1} << n, hi = 2 * lo - 1;
    const double s_n = std::pow(spec.lam.weighted_power_sum(lo, hi, 0.0, ex.p_conj), 1.0 / ex.p_conj);
    rep.s.push_back(s_n);
    const double scale = std::pow(std::ldexp(beta, -static_cast<int>(n)), a) * std::pow(s_n, -ex.p_conj / spec.p);
    TriangleCombSpec comb{{start, len}, static_cast<std::size_t>(lo), {}};
    comb.heights.reserve(lo);
    double lam_sum = 0.0, pow_sum = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) {
      const double lk = spec.lam.term(k);
      const double h = scale * std::pow(lk, -1.0 / (spec.p - 1.0));
      comb.heights.push_back(h);
      lam_sum += h / lk;
      pow_sum += std::pow(h, spec.p);
    }
    rep.level_lambda_sums.push_back(lam_sum);
    rep.level_height_power_sums.push_back(pow_sum);
    combs.push_back(triangle_comb(comb));
    start += len;
  }

  double bound = 0.0;
  for (unsigned n = 0; n < levels; ++n) bound += std::pow(rep.delta[n], a) * rep.block_norms[n];
  rep.analytic_lower_bound = std::exp2(a) * bound;

  Witness w{superpose(combs), std::move(rep)};
  w.report.measured_lambda_variation = lambda_variation(w.g, spec.lam);
  if (spec.measure_modulus) {
    const int depth = spec.dyadic_depth > 0 ? spec.dyadic_depth : resolving_depth(w.g);
    w.report.p_cont_ratio = p_cont_ratio_norm(w.g, spec.p, spec.alpha, depth, spec.refinement);
  }
  return w;
}

struct Theorem31Result {
  double lhs = 0.0;              ///< v_Lambda(f)
  double lip_estimate = 0.0;     ///< sup_delta omega_{1-1/p}(f;delta)/delta^(alpha-1/p)
  double criterion_root = 0.0;   ///< (criterion partial sum)^(1/r')
  double rhs_core = 0.0;         ///< lip_estimate * criterion_root
  std::optional<double> ratio;   ///< lhs / rhs_core; nullopt when not meaningful
  bool divergent_criterion = false;
};

/// Empirical side of v_Lambda(f) <= c ||f||_Lip(alpha;p) (criterion)^(1/r'):
/// the ratio is reported, the constant is never asserted.
inline Theorem31Result theorem31_check(const PiecewiseLinearPeriodic& f, const LambdaSequence& lam, double p,
                                       double alpha, unsigned blocks, int depth = 0, int refinement = 1) {
  const auto ex = embedding_exponents(p, alpha);
  Theorem31Result out;
  if (lam.is_named() && criterion_verdict(lam, p, alpha) == SeriesVerdict::diverges) {
    out.divergent_criterion = true;
    return out;
  }
  out.lhs = lambda_variation(f, lam);
  const auto crit = criterion_partial_sums(lam, p, alpha, blocks);
  out.criterion_root = std::pow(crit.partial_sums.back(), 1.0 / ex.r_conj);
  out.lip_estimate =
      p_cont_ratio_norm(f, p, alpha, depth > 0 ? depth : resolving_depth(f), refinement).value;
  out.rhs_core = out.lip_estimate * out.criterion_root;
  out.ratio = out.rhs_core > 0.0 ? out.lhs / out.rhs_core : 0.0;
  return out;
}

/// lambda_n = 1/alpha_n with alpha_n = d_n^(p-1) / sum_{k<=n} d_k^p, for a
/// positive nonincreasing d. Then sum alpha_n d_n = sum d_n^p / D_n (divergent
/// with D_n when sum d^p diverges) while sum alpha_n^p' = sum d_n^p / D_n^p'
/// converges.
inline LambdaSequence perlman_witness(const std::vector<double>& d, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("perlman_witness: p must be > 1");
  if (d.empty()) throw std::invalid_argument("perlman_witness: empty sequence");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) throw std::invalid_argument("perlman_witness: entries must be positive");
    if (i > 0 && d[i] > d[i - 1]) throw std::invalid_argument("perlman_witness: d must be nonincreasing");
  }
  std::vector<double> alpha;
  alpha.reserve(d.size());
  detail::CompensatedSum running;
  for (double v : d) {
    running.add(std::pow(v, p));
    alpha.push_back(std::pow(v, p - 1.0) / running.sum);
  }
  if (!std::is_sorted(alpha.begin(), alpha.end(), std::greater<>())) {
    std::stable_sort(alpha.begin(), alpha.end(), std::greater<>());
  }
  std::vector<double> lam;
  lam.reserve(alpha.size());
  for (double v : alpha) lam.push_back(1.0 / v);
  return LambdaSequence::explicit_terms(std::move(lam));
}

/// Open window of s for which Wang's series converges and the criterion diverges:
/// 1 < s < (1 + 1/p - alpha)/(1 - alpha).
inline std::pair<double, double> wang_gap_window(double p, double alpha) {
  embedding_exponents(p, alpha);
  return {1.0, (1.0 + 1.0 / p - alpha) / (1.0 - alpha)};
}

inline LambdaSequence wang_gap_family(double p, double alpha, double s) {
  const auto [lo, hi] = wang_gap_window(p, alpha);
  if (!(s > lo && s < hi)) {
    throw std::invalid_argument("wang_gap_family: s = " + std::to_string(s) + " outside (" +
                                std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  return LambdaSequence::block_power_log(alpha, s);
}

}  // namespace lamvar

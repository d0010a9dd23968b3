#pragma once

/**
 * @file sequences.hpp
 * @brief Weight-sequence machinery: class membership, the dyadic embedding
 * criterion series, Wang's series, envelope regularization, the two-sided
 * Hardy sums and the l^p duality extremizer.
 *
 * Series verdicts are only ever symbolic, derived from the closed form of a
 * named family. Partial sums of explicit prefixes never settle convergence.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamvar/lambda_sequence.hpp"

namespace lamvar {

enum class Membership { proved, refuted, undetermined_numeric };
enum class SeriesVerdict { converges, diverges, undetermined };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::proved: return "proved";
    case Membership::refuted: return "refuted";
    case Membership::undetermined_numeric: return "undetermined-numeric";
  }
  return "?";
}

inline const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    case SeriesVerdict::undetermined: return "undetermined";
  }
  return "?";
}

/// Conjugate exponent p' = p/(p-1).
inline double conjugate(double p) { return p / (p - 1.0); }

struct EmbeddingExponents {
  double p, alpha, p_conj, r, r_conj;
};

/// p' and r = 1/(alpha - 1/p), r' = 1/(1 + 1/p - alpha) for 1 < p, 1/p < alpha < 1.
inline EmbeddingExponents embedding_exponents(double p, double alpha) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
  if (!(alpha > 1.0 / p && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (1/p, 1)");
  return {p, alpha, conjugate(p), 1.0 / (alpha - 1.0 / p), 1.0 / (1.0 + 1.0 / p - alpha)};
}

// ---------------------------------------------------------------------------
// Symbolic classification of named families. Exponent comparisons treat
// values within 1e-12 as equal so that boundary parameters computed in
// floating point land on the boundary case.

namespace detail {

inline constexpr double kExponentTol = 1e-12;

inline int compare_exponent(double x, double y) {
  if (std::abs(x - y) <= kExponentTol * std::max(1.0, std::abs(y))) return 0;
  return x < y ? -1 : 1;
}

}  // namespace detail

/// lambda_n -> infinity.
inline Membership tends_to_infinity(const LambdaSequence& lam) {
  switch (lam.family()) {
    case LambdaFamily::power: return lam.s() > 0.0 ? Membership::proved : Membership::refuted;
    case LambdaFamily::power_log:
      return lam.s() > 0.0 || lam.t() > 0.0 ? Membership::proved : Membership::refuted;
    case LambdaFamily::block_power_log: return Membership::proved;
    case LambdaFamily::explicit_terms: return Membership::undetermined_numeric;
  }
  return Membership::undetermined_numeric;
}

/// sum_n k^(-c) lambda_k^(-q) by comparison with p-series and the Cauchy
/// condensation of the log and block families.
inline SeriesVerdict weighted_series_verdict(const LambdaSequence& lam, double c, double q) {
  const auto by = [](bool conv) { return conv ? SeriesVerdict::converges : SeriesVerdict::diverges; };
  switch (lam.family()) {
    case LambdaFamily::power:
      return by(detail::compare_exponent(c + q * lam.s(), 1.0) > 0);
    case LambdaFamily::power_log: {
      const int cmp = detail::compare_exponent(c + q * lam.s(), 1.0);
      if (cmp != 0) return by(cmp > 0);
      return by(detail::compare_exponent(q * lam.t(), 1.0) > 0);
    }
    case LambdaFamily::block_power_log: {
      // Block m holds 2^m terms of size ~ 2^(-mc) * 2^(-mq(1-alpha)) m^(-q(1-alpha)s).
      const int cmp = detail::compare_exponent(c + q * (1.0 - lam.alpha()), 1.0);
      if (cmp != 0) return by(cmp > 0);
      return by(detail::compare_exponent(q * (1.0 - lam.alpha()) * lam.s(), 1.0) > 0);
    }
    case LambdaFamily::explicit_terms:
      return SeriesVerdict::undetermined;
  }
  return SeriesVerdict::undetermined;
}

/// Lambda in S: lambda_n -> infinity and sum 1/lambda_n = infinity.
inline Membership in_class_s(const LambdaSequence& lam) {
  if (!lam.is_named()) return Membership::undetermined_numeric;
  if (tends_to_infinity(lam) != Membership::proved) return Membership::refuted;
  return weighted_series_verdict(lam, 0.0, 1.0) == SeriesVerdict::diverges ? Membership::proved
                                                                            : Membership::refuted;
}

/// Lambda in S_q: Lambda in S and sum lambda_n^(-q) < infinity.
inline Membership in_class_sq(const LambdaSequence& lam, double q) {
  const auto s = in_class_s(lam);
  if (s != Membership::proved) return s;
  return weighted_series_verdict(lam, 0.0, q) == SeriesVerdict::converges ? Membership::proved
                                                                          : Membership::refuted;
}

/// Integral-test bound on sum_{n > N} lambda_n^(-q) for named families with a
/// convergent series; +inf when no bound is available.
inline double inverse_power_tail_bound(const LambdaSequence& lam, double q, std::uint64_t n) {
  if (weighted_series_verdict(lam, 0.0, q) != SeriesVerdict::converges || n == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double x = static_cast<double>(n);
  switch (lam.family()) {
    case LambdaFamily::power: {
      // sum_{k>N} k^(-e) <= int_N^inf x^(-e) dx
      const double e = q * lam.s();
      return std::pow(lam.scale(), -q) * std::pow(x, 1.0 - e) / (e - 1.0);
    }
    case LambdaFamily::block_power_log: {
      // Rest of the current dyadic block, then whole blocks 2^m lambda(m)^(-q)
      // = c^(-q) 2^(m(1 - q(1-alpha))) m^(-q(1-alpha)s) until negligible.
      const auto m0 = static_cast<unsigned>(std::bit_width(n) - 1);
      double total = lam.weighted_power_sum(n + 1, (std::uint64_t{2} << m0) - 1, 0.0, q);
      const double e = 1.0 - lam.alpha();
      const double kappa = q * e * lam.s();
      constexpr unsigned kLastBlock = 100000;
      for (unsigned m = m0 + 1; m < kLastBlock; ++m) {
        const double md = static_cast<double>(m);
        const double block = std::pow(lam.scale(), -q) * std::exp2(md * (1.0 - q * e)) * std::pow(md, -kappa);
        total += block;
        if (block < 1e-17 * total) return total;
      }
      // Only the log factor is left decaying (q(1-alpha) = 1, kappa > 1):
      // sum_{m >= M} m^(-kappa) <= M^(-kappa) + M^(1-kappa)/(kappa-1).
      const double big = static_cast<double>(kLastBlock);
      return total + std::pow(lam.scale(), -q) * (std::pow(big, -kappa) + std::pow(big, 1.0 - kappa) / (kappa - 1.0));
    }
    default:
      return std::numeric_limits<double>::infinity();
  }
}

// ---------------------------------------------------------------------------

struct PartialSumPoint {
  std::uint64_t n;
  double value;
};

struct MembershipReport {
  Membership class_s = Membership::undetermined_numeric;
  Membership class_sq = Membership::undetermined_numeric;
  double q = 0.0;
  std::vector<PartialSumPoint> inverse_sums;        ///< sum_{k<=n} 1/lambda_k
  std::vector<PartialSumPoint> inverse_power_sums;  ///< sum_{k<=n} lambda_k^(-q)
};

/// Partial sums at n = 1, 2, 4, ..., and N.
inline MembershipReport membership_report(const LambdaSequence& lam, double q, std::uint64_t terms) {
  if (!(q > 1.0)) throw std::invalid_argument("membership_report: q must be > 1");
  if (terms < 1) throw std::invalid_argument("membership_report: N must be >= 1");
  lam.require_terms(terms);
  MembershipReport rep;
  rep.q = q;
  rep.class_s = in_class_s(lam);
  rep.class_sq = in_class_sq(lam, q);
  double s1 = 0.0, sq = 0.0;
  std::uint64_t done = 0;
  for (std::uint64_t n = 1;; n = n * 2 > terms ? terms : n * 2) {
    s1 += lam.weighted_power_sum(done + 1, n, 0.0, 1.0);
    sq += lam.weighted_power_sum(done + 1, n, 0.0, q);
    done = n;
    rep.inverse_sums.push_back({n, s1});
    rep.inverse_power_sums.push_back({n, sq});
    if (n == terms) break;
  }
  return rep;
}

/// Positive envelope beta_k = max_j a_j w_(k-j), w_d = theta^(-gamma d) for
/// d >= 0 and theta^d for d < 0. Then a_k <= beta_k,
/// theta^(-gamma) <= beta_(k+1)/beta_k <= theta, and since
/// sum_d w_d = theta^gamma/(theta^gamma - 1) + 1/(theta - 1)
///           <= theta^(1+gamma)/((theta - 1)(theta^gamma - 1)),
/// the sum of beta obeys the same bound relative to the sum of a.
inline std::vector<double> regularize_sequence(const std::vector<double>& a, double theta, double gamma) {
  if (!(theta > 1.0)) throw std::invalid_argument("regularize_sequence: theta must be > 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("regularize_sequence: gamma must be > 0");
  bool any = false;
  for (double v : a) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("regularize_sequence: negative entry");
    any |= v > 0.0;
  }
  if (!any) throw std::invalid_argument("regularize_sequence: all-zero input");
  const double decay = std::pow(theta, -gamma);
  std::vector<double> beta(a.size());
  // Forward pass handles j <= k, backward pass j > k; see the max-plus
  // factorization of the kernel.
  double run = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    run = std::max(a[k], run * decay);
    beta[k] = run;
  }
  for (std::size_t k = a.size(); k-- > 1;) beta[k - 1] = std::max(beta[k - 1], beta[k] / theta);
  return beta;
}

/// theta^(1+gamma) / ((theta - 1)(theta^gamma - 1)).
inline double regularization_sum_bound(double theta, double gamma) {
  return std::pow(theta, 1.0 + gamma) / ((theta - 1.0) * (std::pow(theta, gamma) - 1.0));
}

// ---------------------------------------------------------------------------

struct CriterionBlock {
  unsigned n;
  double inner;  ///< sum_{k=2^n}^{end} (k^(alpha-1/p) lambda_k)^(-p')
  double term;   ///< inner^(r'/p')
};

enum class BlockEnd { inclusive, exclusive };  ///< last k = 2^(n+1) or 2^(n+1) - 1

struct CriterionReport {
  EmbeddingExponents exponents{};
  std::vector<CriterionBlock> blocks;
  std::vector<double> partial_sums;
  SeriesVerdict verdict = SeriesVerdict::undetermined;
  BlockEnd block_end = BlockEnd::inclusive;
};

/// Verdict on the criterion series for a named family, by the block asymptotics
/// inner_n ~ 2^(n(1 - p'(alpha - 1/p)) ...).
inline SeriesVerdict criterion_verdict(const LambdaSequence& lam, double p, double alpha) {
  const auto ex = embedding_exponents(p, alpha);
  const double a = alpha - 1.0 / p;
  const auto by = [](bool conv) { return conv ? SeriesVerdict::converges : SeriesVerdict::diverges; };
  switch (lam.family()) {
    case LambdaFamily::power:
      return by(detail::compare_exponent(lam.s(), 1.0 - alpha) > 0);
    case LambdaFamily::power_log: {
      const int cmp = detail::compare_exponent(lam.s(), 1.0 - alpha);
      if (cmp != 0) return by(cmp > 0);
      return by(detail::compare_exponent(ex.r_conj * lam.t(), 1.0) > 0);
    }
    case LambdaFamily::block_power_log: {
      // inner_n ~ 2^(n(1 - p'a - p'(1 - b))) n^(-p'(1-b)s), b the family's alpha.
      const int cmp = detail::compare_exponent(ex.p_conj * (a + 1.0 - lam.alpha()), 1.0);
      if (cmp != 0) return by(cmp > 0);
      return by(detail::compare_exponent(ex.r_conj * (1.0 - lam.alpha()) * lam.s(), 1.0) > 0);
    }
    case LambdaFamily::explicit_terms:
      return SeriesVerdict::undetermined;
  }
  return SeriesVerdict::undetermined;
}

/// Blocks n = 0..blocks of sum_n (sum_k (k^(alpha-1/p) lambda_k)^(-p'))^(r'/p').
inline CriterionReport criterion_partial_sums(const LambdaSequence& lam, double p, double alpha,
                                              unsigned blocks, BlockEnd end = BlockEnd::inclusive) {
  CriterionReport rep;
  rep.exponents = embedding_exponents(p, alpha);
  rep.block_end = end;
  if (blocks > 60) throw std::invalid_argument("criterion_partial_sums: at most 60 blocks");
  const auto& ex = rep.exponents;
  const double c = ex.p_conj * (alpha - 1.0 / p);
  double total = 0.0;
  for (unsigned n = 0; n <= blocks; ++n) {
    const std::uint64_t lo = std::uint64_t{1} << n;
    const std::uint64_t hi = end == BlockEnd::inclusive ? 2 * lo : 2 * lo - 1;
    const double inner = lam.weighted_power_sum(lo, hi, c, ex.p_conj);
    const double term = std::pow(inner, ex.r_conj / ex.p_conj);
    total += term;
    rep.blocks.push_back({n, inner, term});
    rep.partial_sums.push_back(total);
  }
  rep.verdict = lam.is_named() ? criterion_verdict(lam, p, alpha) : SeriesVerdict::undetermined;
  return rep;
}

struct WangBlock {
  unsigned n;
  double block_sum;  ///< sum_{k=2^n}^{2^(n+1)-1} lambda_k^(-1/(1-alpha))
};

struct WangReport {
  double q = 0.0;
  std::vector<WangBlock> blocks;
  std::vector<double> partial_sums;  ///< after block n, i.e. up to k = 2^(n+1) - 1
  SeriesVerdict verdict = SeriesVerdict::undetermined;
};

/// Dyadic-block partial sums of sum_n lambda_n^(-1/(1-alpha)), blocks 0..count-1.
inline WangReport wang_partial_sums(const LambdaSequence& lam, double alpha, unsigned count) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("wang_partial_sums: alpha must lie in (0,1)");
  if (count > 61) throw std::invalid_argument("wang_partial_sums: at most 61 blocks");
  WangReport rep;
  rep.q = 1.0 / (1.0 - alpha);
  double total = 0.0;
  for (unsigned n = 0; n < count; ++n) {
    const std::uint64_t lo = std::uint64_t{1} << n;
    const double b = lam.weighted_power_sum(lo, 2 * lo - 1, 0.0, rep.q);
    total += b;
    rep.blocks.push_back({n, b});
    rep.partial_sums.push_back(total);
  }
  rep.verdict = lam.is_named() ? weighted_series_verdict(lam, 0.0, rep.q) : SeriesVerdict::undetermined;
  return rep;
}

// ---------------------------------------------------------------------------

struct HardySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = sum_{n>=0} 2^(-n beta) (sum_{1<=k<=nu_n} a_k)^(1/r),
/// rhs = sum_{n>=1} 2^(-n beta) (sum_{nu_(n-1)<=k<=nu_n} a_k)^(1/r),
/// with a[0] = a_1 and n running over the given nu.
inline HardySides hardy_two_sides(double beta, double r, const std::vector<double>& a,
                                  const std::vector<double>& nu) {
  if (!(beta > 0.0)) throw std::invalid_argument("hardy_two_sides: beta must be > 0");
  if (!(r > 1.0) || !std::isfinite(r)) throw std::invalid_argument("hardy_two_sides: r must lie in (1,inf)");
  if (nu.empty() || nu[0] != 1.0) throw std::invalid_argument("hardy_two_sides: nu_0 must equal 1");
  for (std::size_t n = 1; n < nu.size(); ++n) {
    if (!(nu[n] > nu[n - 1])) throw std::invalid_argument("hardy_two_sides: nu must be increasing");
  }
  for (double v : a) {
    if (!(v >= 0.0)) throw std::invalid_argument("hardy_two_sides: a must be nonnegative");
  }
  std::vector<double> prefix(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) prefix[k + 1] = prefix[k] + a[k];
  // sum of a_k over integers k in [lo, hi], clipped to the available range
  auto range_sum = [&](double lo, double hi) {
    const double kmax = std::min(std::floor(hi), static_cast<double>(a.size()));
    const double kmin = std::max(std::ceil(lo), 1.0);
    if (kmax < kmin) return 0.0;
    return prefix[static_cast<std::size_t>(kmax)] - prefix[static_cast<std::size_t>(kmin) - 1];
  };
  HardySides out;
  for (std::size_t n = 0; n < nu.size(); ++n) {
    const double w = std::exp2(-static_cast<double>(n) * beta);
    out.lhs += w * std::pow(range_sum(1.0, nu[n]), 1.0 / r);
    if (n >= 1) out.rhs += w * std::pow(range_sum(nu[n - 1], nu[n]), 1.0 / r);
  }
  return out;
}

/// alpha_n = x_n^(p-1) / ||x||_p^(p-1): ||alpha||_p' = 1 and
/// sum alpha_n x_n = ||x||_p.
inline std::vector<double> dual_extremizer(const std::vector<double>& x, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("dual_extremizer: p must lie in (1,inf)");
  double top = 0.0;
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("dual_extremizer: x must be nonnegative");
    top = std::max(top, v);
  }
  if (top == 0.0) throw std::invalid_argument("dual_extremizer: zero input");
  // Work with x/top to keep powers in range; alpha is scale invariant.
  double s = 0.0;
  for (double v : x) s += std::pow(v / top, p);
  const double norm = std::pow(s, 1.0 / p);
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(std::pow(v / top / norm, p - 1.0));
  return out;
}

inline double lp_norm(const std::vector<double>& x, double p) {
  double top = 0.0;
  for (double v : x) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / top, p);
  return top * std::pow(s, 1.0 / p);
}

}  // namespace lamvar

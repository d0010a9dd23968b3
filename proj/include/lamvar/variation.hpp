#pragma once

/**
 * @file variation.hpp
 * @brief p-variation, Lambda-variation and the two moduli of continuity of
 * piecewise-linear periodic functions.
 *
 * Reductions used throughout:
 *
 *  - Endpoints at local extrema suffice for v_p and v_Lambda: along a
 *    monotone stretch f is monotone, and every objective here is convex in
 *    each endpoint value, so an endpoint can slide to an extremum without loss.
 *  - One circle cut suffices, at the global maximum M. If M is interior to
 *    [a,b], one of [a,M] or [M,b] has |increment| at least |f(b)-f(a)| and is
 *    shorter, so some optimal system never straddles M. This also holds under
 *    the length constraint ||I|| <= delta.
 *
 * Moduli are maximized over a finite endpoint grid and are therefore lower
 * bounds of the true suprema.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"

namespace lamvar {

namespace detail {

inline double abs_pow(double v, double p) {
  const double a = std::abs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

/// Best sum of |y_j - y_i|^p over nonoverlapping intervals with endpoints
/// among the points (sorted by x) and x_j - x_i <= max_length.
inline double interval_dp(const std::vector<Breakpoint>& pts, double p, double max_length) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  std::vector<double> best(n, 0.0);
  std::size_t lo = 0;
  for (std::size_t j = 1; j < n; ++j) {
    while (pts[j].x - pts[lo].x > max_length) ++lo;
    double b = best[j - 1];
    const double yj = pts[j].y;
    for (std::size_t i = lo; i < j; ++i) b = std::max(b, best[i] + abs_pow(yj - pts[i].y, p));
    best[j] = b;
  }
  return best[n - 1];
}

/// Sorted-decreasing pairing of increments with weights 1/lambda_n.
inline double rearranged_weighted_sum(std::vector<double> incs, const LambdaSequence& lam) {
  std::sort(incs.begin(), incs.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t n = 0; n < incs.size(); ++n) {
    if (incs[n] == 0.0) break;
    s += incs[n] / lam.term(n + 1);
  }
  return s;
}

/// Exhaustive search over systems on an extremum sequence whose intervals run
/// from a minimum to a maximum of their own range (or the reverse). Any
/// interval can be shrunk to one of these without losing |increment|.
class LambdaSearch {
 public:
  LambdaSearch(const std::vector<Breakpoint>& ext, const LambdaSequence& lam) : ext_(ext), lam_(lam) {}

  double run() {
    visit(0);
    return best_;
  }

 private:
  void visit(std::size_t pos) {
    const std::size_t last = ext_.size() - 1;
    if (pos >= last) {
      best_ = std::max(best_, rearranged_weighted_sum(incs_, lam_));
      return;
    }
    visit(pos + 1);
    double lo = ext_[pos].y, hi = ext_[pos].y;
    for (std::size_t j = pos + 1; j <= last; ++j) {
      const double y = ext_[j].y;
      lo = std::min(lo, y);
      hi = std::max(hi, y);
      const double y0 = ext_[pos].y;
      const bool up = y0 == lo && y == hi;
      const bool down = y0 == hi && y == lo;
      if (!up && !down) continue;
      incs_.push_back(std::abs(y - y0));
      visit(j);
      incs_.pop_back();
    }
  }

  const std::vector<Breakpoint>& ext_;
  const LambdaSequence& lam_;
  std::vector<double> incs_;
  double best_ = 0.0;
};

}  // namespace detail

/// Largest extremum count handled by exhaustive Lambda-variation search for
/// functions whose extrema are not aligned.
inline constexpr std::size_t kExactLambdaSearchLimit = 24;

/// v_p(f) = sup over systems of (sum |f(I_n)|^p)^(1/p), p >= 1.
///
/// Sum of |arc increments|^p when p == 1 or the extrema are aligned (equal
/// minima or equal maxima); otherwise an O(K^2) dynamic program over the K
/// local extrema, since merging arcs can pay off for p > 1.
inline double p_variation(const PiecewiseLinearPeriodic& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_variation: p must be >= 1");
  const auto ext = detail::extremum_cycle(f.breakpoints());
  if (ext.empty()) return 0.0;
  if (p == 1.0 || detail::extrema_aligned(ext)) {
    double s = 0.0;
    for (std::size_t k = 1; k < ext.size(); ++k) s += detail::abs_pow(ext[k].y - ext[k - 1].y, p);
    return std::pow(s, 1.0 / p);
  }
  return std::pow(detail::interval_dp(ext, p, std::numeric_limits<double>::infinity()), 1.0 / p);
}

/// Lower bound sum_n d_(n)/lambda_n from the monotone arcs alone.
inline double lambda_arc_sum(const PiecewiseLinearPeriodic& f, const LambdaSequence& lam) {
  const auto arcs = monotone_arcs(f);
  lam.require_terms(arcs.arcs.size());
  std::vector<double> incs;
  incs.reserve(arcs.arcs.size());
  for (const auto& a : arcs.arcs) incs.push_back(std::abs(a.increment));
  return detail::rearranged_weighted_sum(std::move(incs), lam);
}

/// v_Lambda(f) = sup over systems of sum |f(I_n)|/lambda_n.
///
/// Arc formula when the extrema are aligned (exact by an injection of system
/// intervals into dominating arcs); exhaustive search over extremum-endpoint
/// systems otherwise. Throws std::domain_error when a non-aligned function has
/// more than kExactLambdaSearchLimit extrema, and std::out_of_range when an
/// explicit lambda prefix is shorter than the arc count.
inline double lambda_variation(const PiecewiseLinearPeriodic& f, const LambdaSequence& lam) {
  const auto ext = detail::extremum_cycle(f.breakpoints());
  if (ext.empty()) return 0.0;
  if (detail::extrema_aligned(ext)) return lambda_arc_sum(f, lam);
  if (ext.size() - 1 > kExactLambdaSearchLimit) {
    throw std::domain_error("lambda_variation: " + std::to_string(ext.size() - 1) +
                            " extrema without aligned minima or maxima; exact search limit is " +
                            std::to_string(kExactLambdaSearchLimit));
  }
  lam.require_terms(ext.size() - 1);
  return detail::LambdaSearch(ext, lam).run();
}

enum class CutPolicy {
  global_maximum,  ///< single cut at the global maximum (exact, see file comment)
  all_candidates,  ///< every grid point; for cross-checking
};

struct ModulusQuery {
  double delta = 1.0;
  int grid_refinement = 0;  ///< extra uniform points per breakpoint segment
  CutPolicy cut = CutPolicy::global_maximum;
};

namespace detail {

/// Breakpoints plus m uniform points inside every segment (wrap included).
inline std::vector<Breakpoint> refined_grid(const PiecewiseLinearPeriodic& f, int m) {
  const auto pts = f.breakpoints();
  const std::size_t n = pts.size();
  std::vector<Breakpoint> grid;
  grid.reserve(n * static_cast<std::size_t>(m + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b0 = pts[i];
    const auto& b1 = pts[(i + 1) % n];
    const double x1 = i + 1 < n ? b1.x : b1.x + 1.0;
    grid.push_back(b0);
    for (int k = 1; k <= m; ++k) {
      const double t = static_cast<double>(k) / (m + 1);
      const double x = b0.x + (x1 - b0.x) * t;
      grid.push_back({x >= 1.0 ? x - 1.0 : x, b0.y + (b1.y - b0.y) * t});
    }
  }
  if (n == 1) grid.resize(1);
  std::sort(grid.begin(), grid.end(), [](const Breakpoint& l, const Breakpoint& r) { return l.x < r.x; });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const Breakpoint& l, const Breakpoint& r) { return l.x == r.x; }),
             grid.end());
  return grid;
}

/// Grid rotated to start at index `cut` and closed one period later.
inline std::vector<Breakpoint> cut_at(const std::vector<Breakpoint>& grid, std::size_t cut) {
  const std::size_t n = grid.size();
  std::vector<Breakpoint> seq;
  seq.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t i = (cut + k) % n;
    double x = grid[i].x;
    if (k > 0 && i <= cut) x += 1.0;
    seq.push_back({x, grid[i].y});
  }
  return seq;
}

}  // namespace detail

/// omega_{1-1/p}(f; delta): sup of (sum |f(I_n)|^p)^(1/p) over systems with
/// every |I_n| <= delta and endpoints on the refined grid. A lower bound of
/// the true modulus; grids for m and m' are nested when (m+1) divides (m'+1),
/// and the value is nondecreasing along such refinements. At delta = 1 the
/// length constraint is void and the result is v_p(f) exactly.
inline double modulus_p_continuity(const PiecewiseLinearPeriodic& f, double p, const ModulusQuery& q) {
  if (!(p > 1.0)) throw std::invalid_argument("modulus_p_continuity: p must be > 1");
  if (!(q.delta > 0.0 && q.delta <= 1.0)) {
    throw std::invalid_argument("modulus_p_continuity: delta must lie in (0,1]");
  }
  if (q.grid_refinement < 0) throw std::invalid_argument("modulus_p_continuity: grid_refinement < 0");
  if (q.delta == 1.0 && q.cut == CutPolicy::global_maximum) return p_variation(f, p);
  const auto grid = detail::refined_grid(f, q.grid_refinement);
  if (grid.size() < 2) return 0.0;
  double best = 0.0;
  if (q.cut == CutPolicy::global_maximum) {
    std::size_t top = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i].y > grid[top].y) top = i;
    }
    best = detail::interval_dp(detail::cut_at(grid, top), p, q.delta);
  } else {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      best = std::max(best, detail::interval_dp(detail::cut_at(grid, c), p, q.delta));
    }
  }
  return std::pow(best, 1.0 / p);
}

namespace detail {

/// Integral over [0, len] of |A + (B - A) t/len|^p.
inline double abs_power_integral(double a, double b, double len, double p) {
  if (len <= 0.0) return 0.0;
  if ((a >= 0.0) == (b >= 0.0) || a == 0.0 || b == 0.0) {
    const double u = std::abs(a), v = std::abs(b);
    const double hi = std::max(u, v), lo = std::min(u, v);
    if (hi == 0.0) return 0.0;
    if (hi - lo <= 1e-8 * hi) return len * std::pow(0.5 * (u + v), p);
    return len * (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
  }
  const double u = std::abs(a), v = std::abs(b);
  return len * (std::pow(u, p + 1.0) + std::pow(v, p + 1.0)) / ((p + 1.0) * (u + v));
}

/// int_0^1 |f(x+h) - f(x)|^p dx in closed form: the integrand's base is
/// piecewise linear with kinks at x_i and x_i - h.
inline double shift_difference_integral(const PiecewiseLinearPeriodic& f, double h, double p) {
  std::vector<double> kinks;
  kinks.reserve(2 * f.size());
  for (const auto& b : f.breakpoints()) {
    kinks.push_back(b.x);
    kinks.push_back(wrap_unit(b.x - h));
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  std::vector<double> d(kinks.size());
  for (std::size_t i = 0; i < kinks.size(); ++i) d[i] = f(kinks[i] + h) - f(kinks[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    const std::size_t j = (i + 1) % kinks.size();
    const double len = j == 0 ? kinks[0] + 1.0 - kinks[i] : kinks[j] - kinks[i];
    s += abs_power_integral(d[i], d[j], len, p);
  }
  return s;
}

}  // namespace detail

/// Breakpoint count up to which the shift set includes every breakpoint
/// difference x_i - x_j.
inline constexpr std::size_t kShiftKinkLimit = 64;

/// omega(f; delta)_p: max over sampled shifts h in [0, delta] of
/// ||f(. + h) - f||_p. Shifts: the grid k/h_samples, every breakpoint
/// difference (for at most kShiftKinkLimit breakpoints) and delta itself.
inline double lp_modulus(const PiecewiseLinearPeriodic& f, double p, double delta, int h_samples = 256) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_modulus: p must be >= 1");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("lp_modulus: delta outside [0,1]");
  if (h_samples < 1) throw std::invalid_argument("lp_modulus: h_samples must be positive");
  if (delta == 0.0 || f.size() == 1) return 0.0;
  std::vector<double> shifts{delta};
  for (int k = 1; k <= h_samples; ++k) {
    const double h = static_cast<double>(k) / h_samples;
    if (h > delta) break;
    shifts.push_back(h);
  }
  if (f.size() <= kShiftKinkLimit) {
    for (const auto& bi : f.breakpoints()) {
      for (const auto& bj : f.breakpoints()) {
        const double h = detail::wrap_unit(bi.x - bj.x);
        if (h > 0.0 && h <= delta) shifts.push_back(h);
      }
    }
  }
  double best = 0.0;
  for (double h : shifts) best = std::max(best, detail::shift_difference_integral(f, h, p));
  return std::pow(best, 1.0 / p);
}

struct RatioRow {
  double delta;
  double modulus;
  double ratio;
};

struct RatioNormReport {
  double value = 0.0;
  std::vector<RatioRow> per_delta;  ///< ordered by increasing delta
  int depth = 0;
};

namespace detail {

/// Dyadic sweep delta = 2^-J, ..., 1/2, 1 with a running max so the reported
/// moduli are nondecreasing in delta.
template <class Modulus>
RatioNormReport dyadic_ratio_sweep(int depth, double exponent, Modulus&& modulus) {
  RatioNormReport rep;
  rep.depth = depth;
  double running = 0.0;
  for (int j = depth; j >= 0; --j) {
    const double delta = std::ldexp(1.0, -j);
    running = std::max(running, modulus(delta));
    const double ratio = running / std::pow(delta, exponent);
    rep.per_delta.push_back({delta, running, ratio});
    rep.value = std::max(rep.value, ratio);
  }
  return rep;
}

}  // namespace detail

/// Dyadic estimate of ||f||_{Lip(alpha;p)} = sup_delta omega(f;delta)_p / delta^alpha.
inline RatioNormReport lip_norm(const PiecewiseLinearPeriodic& f, double p, double alpha, int depth,
                                int h_samples = 256) {
  if (!(p > 1.0)) throw std::invalid_argument("lip_norm: p must be > 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("lip_norm: alpha must lie in (0,1]");
  if (depth < 1) throw std::invalid_argument("lip_norm: depth must be >= 1");
  return detail::dyadic_ratio_sweep(depth, alpha, [&](double delta) {
    return lp_modulus(f, p, delta, h_samples);
  });
}

/// Dyadic estimate of sup_delta omega_{1-1/p}(f;delta) / delta^(alpha - 1/p).
inline RatioNormReport p_cont_ratio_norm(const PiecewiseLinearPeriodic& f, double p, double alpha,
                                         int depth, int refinement) {
  if (!(p > 1.0)) throw std::invalid_argument("p_cont_ratio_norm: p must be > 1");
  if (!(alpha > 1.0 / p && alpha <= 1.0)) {
    throw std::invalid_argument("p_cont_ratio_norm: alpha must lie in (1/p, 1]");
  }
  if (depth < 1) throw std::invalid_argument("p_cont_ratio_norm: depth must be >= 1");
  return detail::dyadic_ratio_sweep(depth, alpha - 1.0 / p, [&](double delta) {
    return modulus_p_continuity(f, p, {delta, refinement, CutPolicy::global_maximum});
  });
}

/// Dyadic depth that resolves the finest breakpoint spacing of f (capped at 30).
inline int resolving_depth(const PiecewiseLinearPeriodic& f) {
  const auto pts = f.breakpoints();
  double gap = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double next = i + 1 < pts.size() ? pts[i + 1].x : pts[0].x + 1.0;
    if (next - pts[i].x > 0.0) gap = std::min(gap, next - pts[i].x);
  }
  const int j = static_cast<int>(std::ceil(-std::log2(gap))) + 2;
  return std::clamp(j, 1, 30);
}

}  // namespace lamvar

#pragma once

/**
 * @file periodic_function.hpp
 * @brief Continuous 1-periodic piecewise-linear functions on the circle R/Z.
 *
 * A function is stored as its breakpoints (x_i, y_i) with 0 <= x_0 < ... < 1.
 * Between consecutive breakpoints it is linear, and the last breakpoint is
 * joined to the first one shifted by one period. Intervals live on the circle:
 * [a, a + length] may run past 1 and wrap.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamvar {

struct Breakpoint {
  double x;
  double y;

  bool operator==(const Breakpoint&) const = default;
};

namespace detail {

/// Reduces x to [0, 1).
inline double wrap_unit(double x) {
  double t = x - std::floor(x);
  return t >= 1.0 ? 0.0 : t;
}

inline double lerp_segment(double x0, double y0, double x1, double y1, double t) {
  if (t == x0) return y0;
  if (t == x1) return y1;
  return y0 + (y1 - y0) * ((t - x0) / (x1 - x0));
}

}  // namespace detail

class PiecewiseLinearPeriodic {
 public:
  /// Validates and sorts the points. Throws std::invalid_argument on an empty
  /// list, a non-finite coordinate, a position outside [0, 1) or a duplicate
  /// position.
  static PiecewiseLinearPeriodic from_points(std::vector<Breakpoint> points) {
    if (points.empty()) {
      throw std::invalid_argument("breakpoints: empty list");
    }
    for (const auto& b : points) {
      if (!std::isfinite(b.x) || !std::isfinite(b.y)) {
        throw std::invalid_argument("breakpoints: non-finite coordinate");
      }
      if (b.x < 0.0 || b.x >= 1.0) {
        throw std::invalid_argument("breakpoints: position " + std::to_string(b.x) +
                                    " outside [0,1)");
      }
    }
    std::sort(points.begin(), points.end(),
              [](const Breakpoint& l, const Breakpoint& r) { return l.x < r.x; });
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].x == points[i - 1].x) {
        throw std::invalid_argument("breakpoints: duplicate position " +
                                    std::to_string(points[i].x));
      }
    }
    return PiecewiseLinearPeriodic(std::move(points));
  }

  static PiecewiseLinearPeriodic constant(double c) { return from_points({{0.0, c}}); }

  double operator()(double x) const {
    const double t = detail::wrap_unit(x);
    const std::size_t n = pts_.size();
    if (n == 1) return pts_[0].y;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), t,
                               [](double v, const Breakpoint& b) { return v < b.x; });
    const auto idx = static_cast<std::size_t>(it - pts_.begin());
    if (idx == 0) {
      // t before the first breakpoint: on the wrap segment, seen from the left.
      return detail::lerp_segment(pts_[n - 1].x - 1.0, pts_[n - 1].y, pts_[0].x, pts_[0].y, t);
    }
    if (idx == n) {
      return detail::lerp_segment(pts_[n - 1].x, pts_[n - 1].y, pts_[0].x + 1.0, pts_[0].y, t);
    }
    return detail::lerp_segment(pts_[idx - 1].x, pts_[idx - 1].y, pts_[idx].x, pts_[idx].y, t);
  }

  std::span<const Breakpoint> breakpoints() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

  /// Function with every value multiplied by c.
  PiecewiseLinearPeriodic scaled(double c) const {
    auto pts = pts_;
    for (auto& b : pts) b.y *= c;
    return PiecewiseLinearPeriodic(std::move(pts));
  }

 private:
  explicit PiecewiseLinearPeriodic(std::vector<Breakpoint> pts) : pts_(std::move(pts)) {}

  std::vector<Breakpoint> pts_;
};

inline PiecewiseLinearPeriodic make_plpf(std::vector<Breakpoint> points) {
  return PiecewiseLinearPeriodic::from_points(std::move(points));
}

/// The arc [a, a + length] of the circle.
struct Interval {
  double a;
  double length;

  double end() const { return a + length; }
};

inline void validate_interval(const Interval& iv) {
  if (!std::isfinite(iv.a) || iv.a < 0.0 || iv.a >= 1.0) {
    throw std::invalid_argument("interval: start outside [0,1)");
  }
  if (!(iv.length > 0.0 && iv.length <= 1.0)) {
    throw std::invalid_argument("interval: length outside (0,1]");
  }
}

/// f(I) = f(b) - f(a).
inline double increment(const PiecewiseLinearPeriodic& f, const Interval& iv) {
  validate_interval(iv);
  return f(iv.end()) - f(iv.a);
}

/// Nonoverlapping intervals contained in one period, sorted by start.
class IntervalSystem {
 public:
  static IntervalSystem from_intervals(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) validate_interval(iv);
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& l, const Interval& r) { return l.a < r.a; });
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].a < intervals[i - 1].end()) {
        throw std::invalid_argument("interval system: overlapping interiors");
      }
    }
    // Closing the circle: the last interval must end before the first restarts.
    if (intervals.size() > 1 && intervals.back().end() > intervals.front().a + 1.0) {
      throw std::invalid_argument("interval system: does not fit in one period");
    }
    return IntervalSystem(std::move(intervals));
  }

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }

  /// Largest interval length, ||I||.
  double mesh() const {
    double m = 0.0;
    for (const auto& iv : intervals_) m = std::max(m, iv.length);
    return m;
  }

 private:
  explicit IntervalSystem(std::vector<Interval> iv) : intervals_(std::move(iv)) {}

  std::vector<Interval> intervals_;
};

/// (sum |f(I_n)|^p)^(1/p) for a concrete system.
inline double system_p_sum(const PiecewiseLinearPeriodic& f, const IntervalSystem& sys, double p) {
  double s = 0.0;
  for (const auto& iv : sys.intervals()) s += std::pow(std::abs(increment(f, iv)), p);
  return std::pow(s, 1.0 / p);
}

struct MonotoneArc {
  double start;  ///< position in [0,1)
  double end;    ///< position in [0,1); end < start when the arc wraps
  double increment;
};

struct MonotoneArcDecomposition {
  std::vector<MonotoneArc> arcs;
};

namespace detail {

/// Breakpoints with consecutive (circular) equal values merged, |dy| <= tol.
inline std::vector<Breakpoint> collapse_plateaus(std::span<const Breakpoint> pts, double tol) {
  std::vector<Breakpoint> out;
  out.reserve(pts.size());
  for (const auto& b : pts) {
    if (out.empty() || std::abs(b.y - out.back().y) > tol) out.push_back(b);
  }
  while (out.size() > 1 && std::abs(out.back().y - out.front().y) <= tol) out.pop_back();
  return out;
}

/// Circular sequence of local extrema starting at the first global maximum and
/// closing on the same point one period later (its x shifted by +1). Positions
/// are unwrapped and strictly increasing. Empty for constant functions.
inline std::vector<Breakpoint> extremum_cycle(std::span<const Breakpoint> pts, double tol = 0.0) {
  auto c = collapse_plateaus(pts, tol);
  if (c.size() < 2) return {};
  std::size_t top = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].y > c[top].y) top = i;
  }
  const std::size_t n = c.size();
  std::vector<Breakpoint> seq;
  seq.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t i = (top + k) % n;
    double x = c[i].x;
    if (k > 0 && i <= top) x += 1.0;
    seq.push_back({x, c[i].y});
  }
  std::vector<Breakpoint> ext;
  ext.push_back(seq.front());
  for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
    const double in = seq[k].y - seq[k - 1].y;
    const double out = seq[k + 1].y - seq[k].y;
    if ((in > 0) != (out > 0)) ext.push_back(seq[k]);
  }
  ext.push_back(seq.back());
  return ext;
}

/// True when every local minimum has the same value or every local maximum
/// does. For such functions each interval maps injectively onto a monotone arc
/// whose increment dominates its own, so arc sums are exact suprema.
inline bool extrema_aligned(std::span<const Breakpoint> ext) {
  if (ext.size() < 3) return true;
  // ext[0] is a maximum, so maxima sit at even and minima at odd indices.
  bool maxima_equal = true, minima_equal = true;
  for (std::size_t k = 2; k < ext.size(); k += 2) maxima_equal &= ext[k].y == ext[0].y;
  for (std::size_t k = 3; k < ext.size(); k += 2) minima_equal &= ext[k].y == ext[1].y;
  return maxima_equal || minima_equal;
}

}  // namespace detail

/// Maximal monotone arcs, starting at the global maximum. Plateaus with
/// |dy| <= tol are collapsed first; constant functions give no arcs.
inline MonotoneArcDecomposition monotone_arcs(const PiecewiseLinearPeriodic& f, double tol = 0.0) {
  const auto pts = f.breakpoints();
  const auto ext = detail::extremum_cycle(pts, tol);
  // Unwrapped positions are x + 1.0 for some breakpoint x; recover x exactly
  // rather than subtracting, which can round.
  auto position = [&](double x) {
    if (x < 1.0) return x;
    for (const auto& b : pts) {
      if (b.x + 1.0 == x) return b.x;
    }
    return detail::wrap_unit(x);
  };
  MonotoneArcDecomposition out;
  for (std::size_t k = 1; k < ext.size(); ++k) {
    out.arcs.push_back({position(ext[k - 1].x), position(ext[k].x), ext[k].y - ext[k - 1].y});
  }
  return out;
}

/// Pointwise sum over the union of breakpoint sets.
inline PiecewiseLinearPeriodic superpose(std::span<const PiecewiseLinearPeriodic> fs) {
  if (fs.empty()) throw std::invalid_argument("superpose: empty list");
  std::vector<double> xs;
  for (const auto& f : fs) {
    for (const auto& b : f.breakpoints()) xs.push_back(b.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Breakpoint> pts;
  pts.reserve(xs.size());
  for (double x : xs) {
    double y = 0.0;
    for (const auto& f : fs) y += f(x);
    pts.push_back({x, y});
  }
  return PiecewiseLinearPeriodic::from_points(std::move(pts));
}

/// ||f'||_p = (sum over segments |slope|^p * length)^(1/p).
inline double derivative_lp_norm(const PiecewiseLinearPeriodic& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("derivative_lp_norm: p must be >= 1");
  const auto pts = f.breakpoints();
  const std::size_t n = pts.size();
  if (n == 1) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b0 = pts[i];
    const auto& b1 = pts[(i + 1) % n];
    const double dx = i + 1 < n ? b1.x - b0.x : b1.x + 1.0 - b0.x;
    const double dy = std::abs(b1.y - b0.y);
    if (dy == 0.0) continue;
    s += std::pow(dy, p) * std::pow(dx, 1.0 - p);
  }
  return std::pow(s, 1.0 / p);
}

inline double sup_norm(const PiecewiseLinearPeriodic& f) {
  double m = 0.0;
  for (const auto& b : f.breakpoints()) m = std::max(m, std::abs(b.y));
  return m;
}

}  // namespace lamvar

#pragma once

// Test-only generators and slow reference computations. Nothing here calls
// into the routines it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"

namespace lamvar::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(integer(0, static_cast<int>(xs.size()) - 1))];
  }

  /// n distinct positions in [0,1); half the time on a coarse dyadic grid so
  /// that exact ties in position differences show up.
  std::vector<double> positions(int n) {
    std::vector<double> xs;
    const bool grid = coin();
    while (static_cast<int>(xs.size()) < n) {
      const double x = grid ? integer(0, 63) / 64.0 : uniform(0.0, 1.0);
      if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
  }

  /// Values are sometimes small integers, which produces plateaus and
  /// repeated extremum levels.
  PiecewiseLinearPeriodic function(int min_points, int max_points) {
    const int n = integer(min_points, max_points);
    const auto xs = positions(n);
    const bool ints = coin(0.3);
    std::vector<Breakpoint> pts;
    for (double x : xs) pts.push_back({x, ints ? static_cast<double>(integer(-2, 2)) : uniform(-1.0, 1.0)});
    return PiecewiseLinearPeriodic::from_points(std::move(pts));
  }

  LambdaSequence explicit_lambda(std::size_t n) {
    std::vector<double> terms;
    double v = uniform(0.2, 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      terms.push_back(v);
      v += coin(0.2) ? 0.0 : uniform(0.0, 2.0);
    }
    return LambdaSequence::explicit_terms(std::move(terms));
  }

  std::vector<double> nonneg(std::size_t n, double zero_rate = 0.3) {
    std::vector<double> a(n);
    for (auto& v : a) v = coin(zero_rate) ? 0.0 : uniform(0.0, 1.0);
    return a;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<double> breakpoint_positions(const PiecewiseLinearPeriodic& f) {
  std::vector<double> xs;
  for (const auto& b : f.breakpoints()) xs.push_back(b.x);
  return xs;
}

inline std::vector<double> with_midpoints(const PiecewiseLinearPeriodic& f) {
  auto xs = breakpoint_positions(f);
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = xs[i], b = i + 1 < n ? xs[i + 1] : xs[0] + 1.0;
    const double m = 0.5 * (a + b);
    xs.push_back(m >= 1.0 ? m - 1.0 : m);
  }
  return xs;
}

/// Sup over h in {delta*i/samples} of the midpoint-rule L^p norm of
/// f(.+h) - f(.) on `points` nodes.
inline double riemann_lp_modulus(const PiecewiseLinearPeriodic& f, double p, double delta, int samples,
                                 int points) {
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double h = delta * i / samples;
    double acc = 0.0;
    for (int k = 0; k < points; ++k) {
      const double x = (k + 0.5) / points;
      acc += std::pow(std::abs(f(x + h) - f(x)), p);
    }
    best = std::max(best, std::pow(acc / points, 1.0 / p));
  }
  return best;
}

/// Best (sum |f(I)|^p)^(1/p) over systems of intervals of length <= delta
/// with endpoints on the grid {k/grid}, every cut tried.
inline double window_modulus(const PiecewiseLinearPeriodic& f, double p, double delta, int grid) {
  double best = 0.0;
  const double eps = 1e-12;
  for (int c = 0; c < grid; ++c) {
    std::vector<double> dp(static_cast<std::size_t>(grid) + 1, 0.0);
    for (int j = 1; j <= grid; ++j) {
      dp[j] = dp[j - 1];
      for (int i = j - 1; i >= 0 && static_cast<double>(j - i) / grid <= delta + eps; --i) {
        const double d = f(static_cast<double>(c + j) / grid) - f(static_cast<double>(c + i) / grid);
        dp[j] = std::max(dp[j], dp[i] + std::pow(std::abs(d), p));
      }
    }
    best = std::max(best, dp.back());
  }
  return std::pow(best, 1.0 / p);
}

inline double relative_error(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace lamvar::testing

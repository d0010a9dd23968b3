#pragma once

// Brute-force references for the variation functionals. They enumerate every
// interval system on a candidate grid and every circle cut, and share no code
// path with the extremum-based routines in variation.hpp.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lamvar/lambda_sequence.hpp"
#include "lamvar/periodic_function.hpp"

namespace lamvar {

inline constexpr std::size_t kBruteLambdaCandidateLimit = 14;

namespace detail {

inline std::vector<double> sorted_unique_positions(std::vector<double> xs) {
  for (auto& x : xs) x = wrap_unit(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Values at x_c, x_{c+1}, ..., x_{c-1}, x_c (one full turn).
inline std::vector<double> turn_values(const PiecewiseLinearPeriodic& f, const std::vector<double>& xs,
                                       std::size_t c) {
  std::vector<double> v;
  for (std::size_t k = 0; k <= xs.size(); ++k) v.push_back(f(xs[(c + k) % xs.size()]));
  return v;
}

}  // namespace detail

/// Exact max of sum |f(I_n)|/lambda_n over systems with endpoints among the
/// candidates (at most 14), every cut, every assignment of weights (the
/// sorted-decreasing one is used, which is optimal by rearrangement).
inline double brute_lambda_variation(const PiecewiseLinearPeriodic& f, const LambdaSequence& lam,
                                     std::vector<double> candidates) {
  const auto xs = detail::sorted_unique_positions(std::move(candidates));
  if (xs.size() > kBruteLambdaCandidateLimit) {
    throw std::invalid_argument("brute_lambda_variation: more than 14 candidate points");
  }
  if (xs.size() < 2) return 0.0;
  double best = 0.0;
  std::vector<double> incs;
  for (std::size_t c = 0; c < xs.size(); ++c) {
    const auto v = detail::turn_values(f, xs, c);
    const std::size_t last = v.size() - 1;
    std::function<void(std::size_t)> visit = [&](std::size_t pos) {
      if (pos >= last) {
        auto sorted = incs;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double s = 0.0;
        for (std::size_t n = 0; n < sorted.size(); ++n) s += sorted[n] / lam.term(n + 1);
        best = std::max(best, s);
        return;
      }
      visit(pos + 1);
      for (std::size_t j = pos + 1; j <= last; ++j) {
        incs.push_back(std::abs(v[j] - v[pos]));
        visit(j);
        incs.pop_back();
      }
    };
    visit(0);
  }
  return best;
}

/// Max of sum |f(I_n)|^p (no root) over systems with endpoints among the
/// candidates, by dynamic programming under every circle cut.
inline double brute_p_variation(const PiecewiseLinearPeriodic& f, double p, std::vector<double> candidates) {
  if (!(p >= 1.0)) throw std::invalid_argument("brute_p_variation: p must be >= 1");
  const auto xs = detail::sorted_unique_positions(std::move(candidates));
  if (xs.size() < 2) return 0.0;
  double best = 0.0;
  for (std::size_t c = 0; c < xs.size(); ++c) {
    const auto v = detail::turn_values(f, xs, c);
    std::vector<double> dp(v.size(), 0.0);
    for (std::size_t j = 1; j < v.size(); ++j) {
      dp[j] = dp[j - 1];
      for (std::size_t i = 0; i < j; ++i) dp[j] = std::max(dp[j], dp[i] + std::pow(std::abs(v[j] - v[i]), p));
    }
    best = std::max(best, dp.back());
  }
  return best;
}

}  // namespace lamvar

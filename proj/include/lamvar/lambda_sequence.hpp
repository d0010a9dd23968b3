#pragma once

/**
 * @file lambda_sequence.hpp
 * @brief Positive nondecreasing weight sequences {lambda_n}, n >= 1.
 *
 * Either an explicit finite prefix or one of three closed-form families:
 *
 *   power            lambda_n = c * n^s
 *   power_log        lambda_n = c * n^s * log(n+1)^t
 *   block_power_log  lambda_k = c * 2^(m(1-alpha)) * max(m,1)^((1-alpha)s),
 *                    m = floor(log2 k)
 *
 * c is a positive scale (default 1). Named families are validated on their
 * parameters, explicit prefixes on every stored term.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lamvar {

enum class LambdaFamily { power, power_log, block_power_log, explicit_terms };

inline const char* family_name(LambdaFamily f) {
  switch (f) {
    case LambdaFamily::power: return "power";
    case LambdaFamily::power_log: return "power_log";
    case LambdaFamily::block_power_log: return "block_power_log";
    case LambdaFamily::explicit_terms: return "explicit";
  }
  return "?";
}

namespace detail {

/// Kahan-compensated accumulator; block sums run over up to 2^16 terms.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

inline constexpr std::uint64_t kDirectTerms = 1u << 16;

/// sum_{k=lo}^{hi} k^(-e), e >= 0. Exact summation for the first 2^16 terms,
/// Euler-Maclaurin (two correction terms) beyond that.
inline double power_sum(double e, std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) return 0.0;
  CompensatedSum acc;
  const std::uint64_t direct_end = std::min(hi, lo + kDirectTerms - 1);
  for (std::uint64_t k = lo; k <= direct_end; ++k) acc.add(std::pow(static_cast<double>(k), -e));
  if (direct_end == hi) return acc.sum;
  const double a = static_cast<double>(direct_end + 1);
  const double b = static_cast<double>(hi);
  auto f = [e](double x) { return std::pow(x, -e); };
  auto d1 = [e](double x) { return -e * std::pow(x, -e - 1.0); };
  auto d3 = [e](double x) { return -e * (e + 1.0) * (e + 2.0) * std::pow(x, -e - 3.0); };
  double integral;
  if (e == 1.0) {
    integral = std::log(b / a);
  } else {
    integral = std::pow(a, 1.0 - e) * std::expm1((1.0 - e) * std::log(b / a)) / (1.0 - e);
  }
  acc.add(integral + 0.5 * (f(a) + f(b)) + (d1(b) - d1(a)) / 12.0 - (d3(b) - d3(a)) / 720.0);
  return acc.sum;
}

}  // namespace detail

class LambdaSequence {
 public:
  static LambdaSequence power(double s, double scale = 1.0) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("power family: s must be >= 0");
    LambdaSequence l(LambdaFamily::power, scale);
    l.s_ = s;
    return l;
  }

  static LambdaSequence power_log(double s, double t, double scale = 1.0) {
    if (!(s >= 0.0) || !(t >= 0.0) || !std::isfinite(s) || !std::isfinite(t)) {
      throw std::invalid_argument("power_log family: s and t must be >= 0");
    }
    LambdaSequence l(LambdaFamily::power_log, scale);
    l.s_ = s;
    l.t_ = t;
    return l;
  }

  static LambdaSequence block_power_log(double alpha, double s, double scale = 1.0) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("block_power_log family: alpha must lie in (0,1)");
    }
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("block_power_log family: s must be >= 0");
    }
    LambdaSequence l(LambdaFamily::block_power_log, scale);
    l.s_ = s;
    l.alpha_ = alpha;
    return l;
  }

  static LambdaSequence explicit_terms(std::vector<double> terms) {
    if (terms.empty()) throw std::invalid_argument("explicit sequence: no terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (!(terms[i] > 0.0) || !std::isfinite(terms[i])) {
        throw std::invalid_argument("explicit sequence: term " + std::to_string(i + 1) +
                                    " is not positive");
      }
      if (i > 0 && terms[i] < terms[i - 1]) {
        throw std::invalid_argument("explicit sequence: term " + std::to_string(i + 1) +
                                    " decreases");
      }
    }
    LambdaSequence l(LambdaFamily::explicit_terms, 1.0);
    l.terms_ = std::move(terms);
    return l;
  }

  LambdaSequence scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale must be positive");
    LambdaSequence l = *this;
    if (family_ == LambdaFamily::explicit_terms) {
      for (auto& v : l.terms_) v *= c;
    } else {
      l.scale_ *= c;
    }
    return l;
  }

  LambdaFamily family() const { return family_; }
  bool is_named() const { return family_ != LambdaFamily::explicit_terms; }
  double s() const { return s_; }
  double t() const { return t_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  const std::vector<double>& terms() const { return terms_; }

  /// Number of accessible terms; nullopt for named families.
  std::optional<std::size_t> available_terms() const {
    if (family_ == LambdaFamily::explicit_terms) return terms_.size();
    return std::nullopt;
  }

  void require_terms(std::size_t n) const {
    if (family_ == LambdaFamily::explicit_terms && n > terms_.size()) {
      throw std::out_of_range("explicit sequence has " + std::to_string(terms_.size()) +
                              " terms, " + std::to_string(n) + " required");
    }
  }

  /// lambda_n, 1-based.
  double term(std::uint64_t n) const {
    if (n == 0) throw std::out_of_range("lambda index starts at 1");
    const double x = static_cast<double>(n);
    switch (family_) {
      case LambdaFamily::power:
        return scale_ * std::pow(x, s_);
      case LambdaFamily::power_log:
        return scale_ * std::pow(x, s_) * std::pow(std::log(x + 1.0), t_);
      case LambdaFamily::block_power_log:
        return block_value(static_cast<unsigned>(std::bit_width(n) - 1));
      case LambdaFamily::explicit_terms:
        require_terms(n);
        return terms_[n - 1];
    }
    return 0.0;
  }

  /// sum_{k=lo}^{hi} k^(-c) * lambda_k^(-q), for c, q >= 0.
  double weighted_power_sum(std::uint64_t lo, std::uint64_t hi, double c, double q) const {
    if (lo == 0) throw std::out_of_range("lambda index starts at 1");
    if (hi < lo) return 0.0;
    switch (family_) {
      case LambdaFamily::power:
        return std::pow(scale_, -q) * detail::power_sum(c + q * s_, lo, hi);
      case LambdaFamily::block_power_log: {
        detail::CompensatedSum acc;
        std::uint64_t k = lo;
        while (k <= hi) {
          const auto m = static_cast<unsigned>(std::bit_width(k) - 1);
          const std::uint64_t block_end = std::min(hi, (std::uint64_t{2} << m) - 1);
          acc.add(std::pow(block_value(m), -q) * detail::power_sum(c, k, block_end));
          k = block_end + 1;
        }
        return acc.sum;
      }
      case LambdaFamily::power_log:
        return power_log_sum(lo, hi, c, q);
      case LambdaFamily::explicit_terms: {
        require_terms(hi);
        detail::CompensatedSum acc;
        for (std::uint64_t k = lo; k <= hi; ++k) {
          acc.add(std::pow(static_cast<double>(k), -c) * std::pow(terms_[k - 1], -q));
        }
        return acc.sum;
      }
    }
    return 0.0;
  }

 private:
  LambdaSequence(LambdaFamily f, double scale) : family_(f), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
  }

  double block_value(unsigned m) const {
    const double e = 1.0 - alpha_;
    const double md = static_cast<double>(std::max(m, 1u));
    return scale_ * std::exp2(static_cast<double>(m) * e) * std::pow(md, e * s_);
  }

  double power_log_sum(std::uint64_t lo, std::uint64_t hi, double c, double q) const {
    auto f = [&](double x) { return std::pow(x, -c) * std::pow(scale_ * std::pow(x, s_) *
                                                                std::pow(std::log(x + 1.0), t_), -q); };
    detail::CompensatedSum acc;
    const std::uint64_t direct_end = std::min(hi, lo + detail::kDirectTerms - 1);
    for (std::uint64_t k = lo; k <= direct_end; ++k) acc.add(f(static_cast<double>(k)));
    if (direct_end == hi) return acc.sum;
    const double a = static_cast<double>(direct_end + 1);
    const double b = static_cast<double>(hi);
    auto d1 = [&](double x) {
      return f(x) * (-(c + q * s_) / x - q * t_ / ((x + 1.0) * std::log(x + 1.0)));
    };
    // Composite Simpson in u = log x, where the integrand is smooth and slowly varying.
    const int panels = 4096;
    const double ua = std::log(a), ub = std::log(b), h = (ub - ua) / panels;
    auto g = [&](double u) { const double x = std::exp(u); return f(x) * x; };
    double simpson = g(ua) + g(ub);
    for (int i = 1; i < panels; ++i) simpson += (i % 2 ? 4.0 : 2.0) * g(ua + i * h);
    const double integral = simpson * h / 3.0;
    acc.add(integral + 0.5 * (f(a) + f(b)) + (d1(b) - d1(a)) / 12.0);
    return acc.sum;
  }

  LambdaFamily family_;
  double scale_ = 1.0;
  double s_ = 0.0;
  double t_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> terms_;
};

}  // namespace lamvar

#pragma once

// Upper bounds on the systematic length k of a linear systematic-repair MSR
// code with sub-packetization l and r parities, together with the earlier
// bounds they improve on.
//
// Every integer quantity (t, the lambda estimates, the k floors, the binomial
// bound) is computed with exact big-integer arithmetic. Real-valued columns
// are reported alongside for comparison with published figures, which are
// quoted without flooring the inner logarithm.

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "msrlab/errors.hpp"

namespace msrlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline BigInt big_pow(std::int64_t base, std::int64_t e) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

inline void require_bound_params(std::int64_t l, std::int64_t r) {
  if (r < 2) throw ParamError("r must be at least 2");
  if (l < 1) throw ParamError("l must be positive");
  if (l % r != 0) throw ParamError("r = " + std::to_string(r) + " does not divide l = " + std::to_string(l));
}

}  // namespace detail

// ceil(r^2 / l).
inline std::int64_t sweep_t(std::int64_t l, std::int64_t r) { return (r * r + l - 1) / l; }

// Largest e >= 0 with (r/(r-1))^e <= x, i.e. r^e <= x (r-1)^e. Requires x >= 1.
inline std::int64_t floor_log_ratio(const BigInt& x, std::int64_t r) {
  if (x < 1) throw ParamError("logarithm argument must be at least 1");
  const long double approx = std::log(static_cast<long double>(x)) / std::log(static_cast<long double>(r) / (r - 1));
  std::int64_t e = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(approx)));
  auto fits = [&](std::int64_t k) { return detail::big_pow(r, k) <= x * detail::big_pow(r - 1, k); };
  while (e > 0 && !fits(e)) --e;
  while (fits(e + 1)) ++e;
  return e;
}

// Largest k >= 0 with base^k <= x. Requires base >= 2, x >= 1.
inline std::int64_t floor_log_int(const BigInt& x, std::int64_t base) {
  if (x < 1) throw ParamError("logarithm argument must be at least 1");
  const long double approx = std::log(static_cast<long double>(x)) / std::log(static_cast<long double>(base));
  std::int64_t k = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(approx)));
  while (k > 0 && detail::big_pow(base, k) > x) --k;
  while (detail::big_pow(base, k + 1) <= x) ++k;
  return k;
}

// log_base(x) as a double, exact when x is an integer power of base.
inline double log_in_base(std::int64_t x, std::int64_t base) {
  std::int64_t e = 0;
  std::int64_t y = 1;
  while (y < x) {
    y *= base;
    ++e;
  }
  if (y == x) return static_cast<double>(e);
  return static_cast<double>(std::log(static_cast<long double>(x)) / std::log(static_cast<long double>(base)));
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  BigInt acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

struct BoundReport {
  std::int64_t l = 0;
  std::int64_t r = 0;
  std::int64_t t = 0;

  bool lambda_exact = false;         // lambda = r exactly (t = r)
  std::int64_t lambda_estimate = 0;  // r, or t+1+floor(log_{r/(r-1)}((r-t)l/r))
  double lambda_real = 0;            // same expression without the floor

  Rational quadratic;  // (l^2 - 1)/(r - 1)
  std::int64_t quadratic_floor = 0;

  double rlog_real = 0;         // 2 * lambda_real * log_r l
  std::int64_t rlog_floor = 0;  // largest k with r^k <= l^(2*lambda_estimate)

  BigInt prior_tamo;  // l * C(l, l/r)
  std::int64_t prior_goparaju_quadratic = 0;
  std::int64_t prior_goparaju_lambda = 0;  // floor(log_{r/(r-1)} l) + 1
  double prior_goparaju_lambda_real = 0;
  double prior_goparaju_log_real = 0;         // 2 * lambda2_real * log_2 l
  std::int64_t prior_goparaju_log_floor = 0;  // largest k with 2^k <= l^(2*lambda2)
};

inline BoundReport evaluate_bounds(std::int64_t l, std::int64_t r) {
  detail::require_bound_params(l, r);
  BoundReport b;
  b.l = l;
  b.r = r;
  b.t = sweep_t(l, r);

  const double log_ratio = std::log(static_cast<double>(r) / static_cast<double>(r - 1));
  if (b.t == r) {
    b.lambda_exact = true;
    b.lambda_estimate = r;
    b.lambda_real = static_cast<double>(r);
  } else {
    const std::int64_t x = (r - b.t) * (l / r);
    b.lambda_estimate = b.t + 1 + floor_log_ratio(BigInt(x), r);
    b.lambda_real = static_cast<double>(b.t + 1) + std::log(static_cast<double>(x)) / log_ratio;
  }

  b.quadratic = Rational(BigInt(l) * l - 1, BigInt(r - 1));
  b.quadratic_floor = static_cast<std::int64_t>((BigInt(l) * l - 1) / (r - 1));

  b.rlog_real = 2.0 * b.lambda_real * log_in_base(l, r);
  b.rlog_floor = floor_log_int(detail::big_pow(l, 2 * b.lambda_estimate), r);

  b.prior_tamo = BigInt(l) * binomial(l, l / r);
  b.prior_goparaju_quadratic = l * l;
  b.prior_goparaju_lambda = floor_log_ratio(BigInt(l), r) + 1;
  b.prior_goparaju_lambda_real = 1.0 + std::log(static_cast<double>(l)) / log_ratio;
  b.prior_goparaju_log_real = 2.0 * b.prior_goparaju_lambda_real * log_in_base(l, 2);
  b.prior_goparaju_log_floor = floor_log_int(detail::big_pow(l, 2 * b.prior_goparaju_lambda), 2);
  return b;
}

struct DimBounds {
  Rational thm3;  // m l/r when m <= t, else l - (l/r)(r-t)((r-1)/r)^(m-t)
  Rational eq29;  // (1 - ((r-1)/r)^m) l
  bool exact = false;  // m <= t: thm3 is an equality, not a lower bound
};

inline DimBounds dim_lower_bound(std::int64_t m, std::int64_t l, std::int64_t r) {
  detail::require_bound_params(l, r);
  if (m < 1) throw ParamError("subset size must be at least 1");
  const std::int64_t t = sweep_t(l, r);
  const std::int64_t beta = l / r;
  DimBounds d;
  if (m <= t) {
    d.exact = true;
    d.thm3 = Rational(m * beta);
  } else {
    const std::int64_t e = m - t;
    d.thm3 = Rational(l) - Rational(BigInt(beta) * (r - t) * detail::big_pow(r - 1, e), detail::big_pow(r, e));
  }
  d.eq29 = Rational(l) - Rational(BigInt(l) * detail::big_pow(r - 1, m), detail::big_pow(r, m));
  return d;
}

inline BigInt ceil_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt quotient = num / den;
  if (quotient * den < num) ++quotient;
  return quotient;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace msrlab

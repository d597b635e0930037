// Independent reference implementations in long double. Nothing here calls
// into the library.
#pragma once

#include <cmath>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;
inline constexpr long double kEuler = 0.577215664901532860606512090082402431L;

// 2/sqrt(pi) sum (-1)^k x^(2k+1) / (k! (2k+1))
inline long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= -x * x / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
  }
  return 2.0L / std::sqrt(kPi) * sum;
}

// sqrt(pi) exp(x^2) erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
inline long double erfcx_cf(long double x) {
  const long double tiny = 1e-300L;
  long double f = x;
  long double c = x;
  long double d = 0.0L;
  for (int k = 1; k < 200000; ++k) {
    const long double a = k / 2.0L;
    d = x + a * d;
    if (d == 0.0L) d = tiny;
    c = x + a / c;
    if (c == 0.0L) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-21L) break;
  }
  return 1.0L / (std::sqrt(kPi) * f);
}

inline long double erfc(long double x) {
  if (x < 2.0L) return 1.0L - erf_series(x);
  return std::exp(-x * x) * erfcx_cf(x);
}

inline long double erfcx(long double x) {
  if (x < 2.0L) return std::exp(x * x) * (1.0L - erf_series(x));
  return erfcx_cf(x);
}

// Stirling series after shifting the argument past 30.
inline long double lgamma(long double x) {
  long double shift = 0.0L;
  while (x < 30.0L) {
    shift += std::log(x);
    x += 1.0L;
  }
  const long double z = 1.0L / (x * x);
  const long double series =
      (1.0L / 12 - z * (1.0L / 360 - z * (1.0L / 1260 - z * (1.0L / 1680 - z * (1.0L / 1188 - z * 691.0L / 360360))))) /
      x;
  return (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2 * kPi) + series - shift;
}

inline long double gamma(long double x) { return std::exp(lgamma(x)); }

// E1 by its power series for small x, by the continued fraction otherwise.
inline long double e1(long double x) {
  if (x <= 2.0L) {
    long double term = 1.0L;
    long double sum = 0.0L;
    for (int k = 1; k < 300; ++k) {
      term *= -x / k;
      sum += term / k;
      if (std::fabs(term / k) < 1e-22L) break;
    }
    return -kEuler - std::log(x) - sum;
  }
  // e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
  const long double tiny = 1e-300L;
  long double b = x + 1.0L;
  long double c = 1.0L / tiny;
  long double d = 1.0L / b;
  long double h = d;
  for (int i = 1; i < 100000; ++i) {
    const long double a = -static_cast<long double>(i) * i;
    b += 2.0L;
    d = 1.0L / (a * d + b);
    c = b + a / c;
    const long double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0L) < 1e-21L) break;
  }
  return h * std::exp(-x);
}

// sum (-1)^k (x/2)^(2k+v) / (k! Gamma(k+v+1))
inline long double besselj(long double v, long double x) {
  if (x == 0.0L) return v == 0.0L ? 1.0L : (v > 0.0L ? 0.0L : HUGE_VALL);
  const long double half = x / 2.0L;
  long double term = std::exp(v * std::log(half) - lgamma(v + 1.0L));
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -half * half / (k * (k + v));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > x) break;
  }
  return sum;
}

}  // namespace oracle

#include "gptrans/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace gptrans::specfun {

void AccuracyBudget::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) {
    throw std::invalid_argument("AccuracyBudget: rel_tol must lie in (0, 1e-3)");
  }
  if (max_terms < 10) {
    throw std::invalid_argument("AccuracyBudget: max_terms must be >= 10");
  }
}

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1/sqrt(pi)

// W. J. Cody, "Rational Chebyshev approximations for the error function",
// Math. Comp. 23 (1969) 631-638. Coefficients as distributed in netlib
// specfun/erf (CALERF).
constexpr std::array<double, 5> kErfA = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                                         3209.37758913846947, 0.185777706184603153};
constexpr std::array<double, 4> kErfB = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                                         2844.23683343917062};
constexpr std::array<double, 9> kErfC = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                                         298.635138197400131,  881.95222124176909,  1712.04761263407058,
                                         2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr std::array<double, 8> kErfD = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                                         1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                                         3439.36767414372164, 1230.33935480374942};
constexpr std::array<double, 6> kErfP = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                                         0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr std::array<double, 5> kErfQ = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                                         0.0605183413124413191, 0.00233520497626869185};

constexpr double kErfThresh = 0.46875;

// erf(y) for |y| <= kErfThresh.
double erf_small(double y) {
  const double ysq = y * y;
  double num = kErfA[4] * ysq;
  double den = ysq;
  for (int i = 0; i < 3; ++i) {
    num = (num + kErfA[i]) * ysq;
    den = (den + kErfB[i]) * ysq;
  }
  return y * (num + kErfA[3]) / (den + kErfB[3]);
}

// exp(y^2) * erfc(y) for y > kErfThresh, evaluated without forming exp(y^2).
double erfcx_positive(double y) {
  if (y <= 4.0) {
    double num = kErfC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfC[i]) * y;
      den = (den + kErfD[i]) * y;
    }
    return (num + kErfC[7]) / (den + kErfD[7]);
  }
  if (y >= 6.71e7) {
    return kInvSqrtPi / y;
  }
  const double ysq = 1.0 / (y * y);
  double num = kErfP[5] * ysq;
  double den = ysq;
  for (int i = 0; i < 4; ++i) {
    num = (num + kErfP[i]) * ysq;
    den = (den + kErfQ[i]) * ysq;
  }
  const double r = ysq * (num + kErfP[4]) / (den + kErfQ[4]);
  return (kInvSqrtPi - r) / y;
}

// exp(-y^2) with y^2 split so the rounding of y*y does not leak into the result.
double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// Lanczos approximation, g = 7, n = 9 (P. Godfrey's coefficient set).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double y = std::fabs(x);
  if (y <= kErfThresh) return erf_small(x);
  const double c = erfc(y);
  return x > 0 ? 1.0 - c : c - 1.0;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  const double y = std::fabs(x);
  double r;
  if (y <= kErfThresh) {
    r = 1.0 - erf_small(y);
  } else if (y >= 26.543) {
    r = 0.0;
  } else {
    r = exp_neg_square(y) * erfcx_positive(y);
  }
  return x < 0 ? 2.0 - r : r;
}

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  const double y = std::fabs(x);
  double r;
  if (y <= kErfThresh) {
    r = std::exp(y * y) * (1.0 - erf_small(y));
  } else {
    r = erfcx_positive(y);
  }
  if (x >= 0) return r;
  // exp(x^2) * (2 - erfc(|x|)); overflows to +inf below about -26.6.
  if (y > 26.628) return std::numeric_limits<double>::infinity();
  const double e = std::exp(y * y);
  return 2.0 * e - r;
}

double gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("gamma: argument must be positive");
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  // Split the power so t^(x-1/2) does not overflow before exp(-t) is applied.
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * lanczos_sum(xm1);
}

double lgamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("lgamma: argument must be positive");
  }
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lgamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

namespace detail {

double besselj_series(double v, double x, const AccuracyBudget& budget) {
  if (x == 0.0) {
    if (v == 0.0) return 1.0;
    return v > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const long double half = 0.5L * x;
  const long double q = half * half;
  long double term;
  if (v < 100.0) {
    term = std::pow(half, static_cast<long double>(v)) / gamma(v + 1.0);
  } else {
    term = std::exp(static_cast<long double>(v) * std::log(half) - lgamma(v + 1.0));
  }
  long double sum = term;
  const long double stop = budget.rel_tol * 1e-6;
  for (int k = 0; k < budget.max_terms; ++k) {
    term *= -q / ((k + 1.0L) * (k + 1.0L + v));
    sum += term;
    if (k + 1 > half && std::fabs(term) <= stop * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

double besselj_asymptotic(double v, double x) {
  // Reduce to a base order mu in [-1/2, 1/2) where the Hankel expansion
  // converges quickly, then recur upward (stable while the order is below x).
  const double base = std::floor(v + 0.5);
  const double mu = v - base;
  const int steps = static_cast<int>(base);

  auto hankel = [x](double order) {
    const double m4 = 4.0 * order * order;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (m4 - odd * odd) / (8.0 * k * x);
      const double mag = std::fabs(term);
      if (mag > prev) break;  // asymptotic series has started to diverge
      const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      if (k % 2 == 1) {
        q += sign * term;
      } else {
        p += sign * term;
      }
      if (mag <= 1e-17 * (std::fabs(p) + std::fabs(q))) break;
      prev = mag;
    }
    const double phase = (0.5 * order + 0.25) * std::numbers::pi;
    const double cx = std::cos(x);
    const double sx = std::sin(x);
    const double cp = std::cos(phase);
    const double sp = std::sin(phase);
    const double cos_chi = cx * cp + sx * sp;
    const double sin_chi = sx * cp - cx * sp;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
  };

  double jm = hankel(mu);
  if (steps == 0) return jm;
  double j = hankel(mu + 1.0);
  for (int k = 1; k < steps; ++k) {
    const double order = mu + k;
    const double next = (2.0 * order / x) * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

}  // namespace detail

double besselj(double v, double x, const AccuracyBudget& budget) {
  if (std::isnan(v) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (v < -0.5) {
    throw DomainError("besselj: order must be >= -1/2");
  }
  if (x < 0.0) {
    throw DomainError("besselj: argument must be >= 0");
  }
  if (x <= kBesselCrossover || v >= x) {
    return detail::besselj_series(v, x, budget);
  }
  return detail::besselj_asymptotic(v, x);
}

double exp_e1(double x, const AccuracyBudget& budget) {
  if (std::isnan(x)) return x;
  if (!(x > 0.0)) {
    throw DomainError("exp_e1: argument must be positive");
  }
  if (x <= 1.0) {
    long double sum = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= budget.max_terms; ++k) {
      term *= -static_cast<long double>(x) / k;
      const long double add = term / k;
      sum += add;
      if (std::fabs(add) <= 1e-21L * std::fabs(sum)) break;
    }
    return static_cast<double>(-kEulerGamma - std::log(static_cast<long double>(x)) - sum);
  }
  // Modified Lentz evaluation of the continued fraction
  // E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
  constexpr long double tiny = 1e-300L;
  long double b = x + 1.0L;
  long double c = 1.0L / tiny;
  long double d = 1.0L / b;
  long double h = d;
  for (int i = 1; i <= budget.max_terms; ++i) {
    const long double an = -static_cast<long double>(i) * i;
    b += 2.0L;
    d = 1.0L / (an * d + b);
    c = b + an / c;
    const long double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0L) <= 1e-19L) break;
  }
  return static_cast<double>(h * std::exp(-static_cast<long double>(x)));
}

}  // namespace gptrans::specfun

// Special functions used by the transform kernels and their closed forms.
//
// Everything here is pure and thread-safe. Arguments outside a function's
// domain raise specfun::DomainError.
#pragma once

#include <stdexcept>
#include <string>

namespace gptrans::specfun {

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Controls series truncation for the series-based routines.
struct AccuracyBudget {
  double rel_tol = 1e-12;
  int max_terms = 500;

  /// Throws std::invalid_argument unless 0 < rel_tol < 1e-3 and max_terms >= 10.
  void validate() const;
};

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Complementary error function, (2/sqrt(pi)) * int_x^inf exp(-u^2) du.
double erfc(double x);

/// erf(x) = 1 - erfc(x), computed without cancellation for small |x|.
double erf(double x);

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// For x > 0.5 this is evaluated directly from a rational approximation,
/// never as a product, so it stays finite for every positive double.
/// erfcx(+inf) = 0.
double erfcx(double x);

/// Euler gamma function for x > 0.
double gamma(double x);

/// log(gamma(x)) for x > 0.
double lgamma(double x);

/// Bessel function of the first kind J_v(x), v >= -1/2, x >= 0.
///
/// Power series for x <= kBesselCrossover, Hankel asymptotic expansion
/// (with upward recurrence from a fractional base order) beyond it.
double besselj(double v, double x, const AccuracyBudget& budget = {});

inline constexpr double kBesselCrossover = 12.0;

/// Exponential integral E1(x) = int_x^inf exp(-t)/t dt, x > 0.
double exp_e1(double x, const AccuracyBudget& budget = {});

namespace detail {

// Both Bessel branches are exposed so the seam at the crossover can be tested.
double besselj_series(double v, double x, const AccuracyBudget& budget = {});
double besselj_asymptotic(double v, double x);

}  // namespace detail

}  // namespace gptrans::specfun

// Quadrature over (0, inf).
//
// Three node schemes share one trapezoidal core: exp-sinh for integrands that
// decay fast, tanh-sinh on a split domain for algebraic tails, and zero-to-zero
// cells with Euler summation for oscillatory integrands. Abel regularization
// sits on top of the other two.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gptrans/decay_class.hpp"

namespace gptrans::quad {

enum class Strategy { Auto, Decay, Algebraic, Oscillatory, Abel };
enum class Status { Converged, MaxEvals, DivergentSuspected };

std::string_view to_string(Strategy s);
std::string_view to_string(Status s);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Raised by integrate_auto when the hint gives no usable decay structure.
class UnclassifiedError : public std::runtime_error {
 public:
  explicit UnclassifiedError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evals = 2'000'000;
  Strategy strategy = Strategy::Auto;

  // Oscillatory strategy: the integrand's sign pattern repeats with this
  // period in t = x^oscillation_power, with a zero at t = oscillation_phase.
  std::optional<double> oscillation_period_hint;
  double oscillation_phase = 0.0;
  double oscillation_power = 1.0;

  // Algebraic strategy: the domain is split here (default 1).
  std::optional<double> split_point;

  double abel_eps0 = 0.25;
  int abel_rungs = 8;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
  std::size_t evals = 0;
  Status status = Status::Converged;
  Strategy strategy_used = Strategy::Auto;

  bool converged() const { return status == Status::Converged; }
};

/// Integrand value that already carries an absolute error, as produced by an
/// inner quadrature in an iterated integral.
struct Sample {
  double value = 0.0;
  double err = 0.0;
};

using Integrand = std::function<double(double)>;
using NestedIntegrand = std::function<Sample(double)>;

QuadResult integrate_decay(const Integrand& f, const QuadOptions& opts = {});
QuadResult integrate_algebraic(const Integrand& f, const QuadOptions& opts = {});
QuadResult integrate_oscillatory(const Integrand& f, double period, const QuadOptions& opts = {});
QuadResult integrate_abel(const Integrand& f, const QuadOptions& opts = {});

/// Dispatches on the hint. Throws UnclassifiedError for BoundedUnknown.
QuadResult integrate_auto(const Integrand& f, const expr::DecayClass& hint, const QuadOptions& opts = {});

/// Runs the strategy named in opts.strategy (Auto is rejected here).
QuadResult integrate(const Integrand& f, const QuadOptions& opts);

/// Tanh-sinh rule on a finite interval [a, b].
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts = {});

// Nested forms: the inner errors are integrated against the quadrature
// weights and added to err_est.
QuadResult integrate_decay(const NestedIntegrand& f, const QuadOptions& opts);
QuadResult integrate_algebraic(const NestedIntegrand& f, const QuadOptions& opts);
QuadResult integrate_oscillatory(const NestedIntegrand& f, double period, const QuadOptions& opts);
QuadResult integrate_abel(const NestedIntegrand& f, const QuadOptions& opts);
QuadResult integrate(const NestedIntegrand& f, const QuadOptions& opts);

namespace detail {

// Oscillatory cell summation with the decay-of-cells check disabled. Used
// when an outside factor (a Laplace kernel, an Abel damping) guarantees
// convergence and the cells may shrink slowly at first.
QuadResult integrate_oscillatory_damped(const NestedIntegrand& f, double period, const QuadOptions& opts);

}  // namespace detail

}  // namespace gptrans::quad

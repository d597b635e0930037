// Structural decay classification of an integrand, produced by
// expr::classify_decay and consumed by quad::integrate_auto.
#pragma once

#include <string>

namespace gptrans::expr {

enum class DecayKind { ExpDecay, Algebraic, Oscillatory, BoundedUnknown };

struct DecayClass {
  DecayKind kind = DecayKind::BoundedUnknown;
  // ExpDecay: integrand carries exp(-rate * x^power).
  double rate = 0.0;
  // ExpDecay: exponent of the decaying factor. Oscillatory: the oscillating
  // factor is sin/cos(c * x^power), i.e. periodic in t = x^power.
  double power = 1.0;
  // Algebraic/Oscillatory: envelope behaves like x^tail_exponent at infinity.
  double tail_exponent = 0.0;
  // Oscillatory: period of the oscillating factor in t, and its first zero
  // in t (0 for sine, a quarter period for cosine).
  double period = 0.0;
  double phase = 0.0;

  static DecayClass exp_decay(double rate, double power) {
    DecayClass d;
    d.kind = DecayKind::ExpDecay;
    d.rate = rate;
    d.power = power;
    return d;
  }
  static DecayClass algebraic(double tail_exponent) {
    DecayClass d;
    d.kind = DecayKind::Algebraic;
    d.tail_exponent = tail_exponent;
    return d;
  }
  static DecayClass oscillatory(double period, double power = 1.0, double phase = 0.0,
                                double tail_exponent = 0.0) {
    DecayClass d;
    d.kind = DecayKind::Oscillatory;
    d.period = period;
    d.power = power;
    d.phase = phase;
    d.tail_exponent = tail_exponent;
    return d;
  }
  static DecayClass unknown() { return {}; }
};

std::string to_string(const DecayClass& d);

}  // namespace gptrans::expr

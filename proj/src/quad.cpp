#include "gptrans/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gptrans::quad {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "AUTO";
    case Strategy::Decay: return "DECAY";
    case Strategy::Algebraic: return "ALGEBRAIC";
    case Strategy::Oscillatory: return "OSCILLATORY";
    case Strategy::Abel: return "ABEL";
  }
  return "?";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Converged: return "CONVERGED";
    case Status::MaxEvals: return "MAX_EVALS";
    case Status::DivergentSuspected: return "DIVERGENT_SUSPECTED";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "auto") return Strategy::Auto;
  if (lower == "decay") return Strategy::Decay;
  if (lower == "algebraic") return Strategy::Algebraic;
  if (lower == "oscillatory") return Strategy::Oscillatory;
  if (lower == "abel") return Strategy::Abel;
  return std::nullopt;
}

void QuadOptions::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadOptions: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadOptions: abs_tol must be > 0");
  if (max_evals < 1000) throw std::invalid_argument("QuadOptions: max_evals must be >= 1000");
  if (strategy == Strategy::Oscillatory && !oscillation_period_hint) {
    throw std::invalid_argument("QuadOptions: oscillatory strategy needs oscillation_period_hint");
  }
  if (oscillation_period_hint && !(*oscillation_period_hint > 0.0 && std::isfinite(*oscillation_period_hint))) {
    throw std::invalid_argument("QuadOptions: oscillation period must be positive");
  }
  if (!(oscillation_power > 0.0) || !std::isfinite(oscillation_phase)) {
    throw std::invalid_argument("QuadOptions: oscillation power must be positive, phase finite");
  }
  if (split_point && !(*split_point > 0.0 && std::isfinite(*split_point))) {
    throw std::invalid_argument("QuadOptions: split_point must be positive");
  }
  if (!(abel_eps0 > 0.0)) throw std::invalid_argument("QuadOptions: abel_eps0 must be > 0");
  if (abel_rungs < 2 || abel_rungs > 30) throw std::invalid_argument("QuadOptions: abel_rungs must lie in [2, 30]");
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kNegligible = 1e-18;  // tail terms below this fraction of the largest are dropped
constexpr double kStartStep = 0.5;
constexpr int kMinLevel = 3;
constexpr int kMaxLevel = 12;
constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();

struct Node {
  double x;
  double w;
};

// x = exp(pi/2 sinh t) maps the real line onto (0, inf).
struct ExpSinh {
  static constexpr double t_max = 6.5;
  Node operator()(double t) const {
    const double x = std::exp(kHalfPi * std::sinh(t));
    return {x, x * kHalfPi * std::cosh(t)};
  }
  bool inside(double) const { return true; }
};

// x = (a+b)/2 + (b-a)/2 tanh(pi/2 sinh t), with the distance to the nearer
// endpoint computed directly so nodes close to a or b keep full precision.
struct TanhSinh {
  static constexpr double t_max = 6.0;
  double a;
  double b;
  Node operator()(double t) const {
    const double u = kHalfPi * std::sinh(std::fabs(t));
    const double e = std::exp(-2.0 * u);
    const double len = b - a;
    const double delta = len * e / (1.0 + e);
    const double x = t >= 0.0 ? b - delta : a + delta;
    const double w = len * std::numbers::pi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
    return {x, w};
  }
  bool inside(double x) const { return x > a && x < b; }
};

struct Target {
  double rel;
  double abs;
  double operator()(double value) const { return std::max(rel * std::fabs(value), abs); }
};

struct Core {
  double value = 0.0;
  double disc_err = 0.0;    // discretization error estimate
  double nested_err = 0.0;  // integrated error carried by the samples
  std::size_t evals = 0;
  Status status = Status::Converged;
};

// Trapezoidal rule in t under the given map, halving the step until two
// successive levels agree. The tails are truncated once during the first
// level and then held fixed.
template <class Map>
Core de_core(const NestedIntegrand& f, const Map& map, const Target& target, std::size_t max_evals) {
  Core out;
  bool bad_value = false;

  auto term = [&](double t, double& v, double& e) -> bool {
    const Node nd = map(t);
    if (nd.w == 0.0 || !map.inside(nd.x)) {
      v = 0.0;
      e = 0.0;
      return true;
    }
    const Sample s = f(nd.x);
    ++out.evals;
    v = s.value * nd.w;
    e = std::fabs(s.err) * nd.w;
    return std::isfinite(v) && std::isfinite(e);
  };

  const double h0 = kStartStep;
  double sum = 0.0;
  double esum = 0.0;
  double max_abs = 0.0;
  double abs_sum = 0.0;
  {
    double v, e;
    if (!term(0.0, v, e)) {
      out.status = Status::DivergentSuspected;
      out.value = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    sum = v;
    esum = e;
    max_abs = std::fabs(v);
    abs_sum = max_abs;
  }

  std::array<int, 2> kmax{0, 0};
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    int small_run = 0;
    int k = 1;
    for (;; ++k) {
      const double t = k * h0;
      if (t > Map::t_max) {
        // Still-significant terms at the end of the representable range.
        if (small_run == 0 && max_abs > 0.0) out.status = Status::DivergentSuspected;
        break;
      }
      if (out.evals >= max_evals) {
        out.status = Status::MaxEvals;
        break;
      }
      double v, e;
      if (!term(sign * t, v, e)) {
        if (small_run == 0 && max_abs > 0.0) bad_value = true;
        break;
      }
      sum += v;
      esum += e;
      abs_sum += std::fabs(v);
      max_abs = std::max(max_abs, std::fabs(v));
      // Leading zeros (all terms so far exactly 0) do not end the scan: the
      // mass may sit far from t = 0.
      if (max_abs > 0.0 && std::fabs(v) <= kNegligible * max_abs) {
        if (++small_run >= 2) {
          ++k;
          break;
        }
      } else {
        small_run = 0;
      }
    }
    kmax[side] = k - 1;
  }

  double h = h0;
  double integral = h * sum;
  double nested = h * esum;
  double magnitude = h * abs_sum;
  out.value = integral;
  out.nested_err = nested;
  if (bad_value) {
    out.status = Status::DivergentSuspected;
    out.disc_err = std::numeric_limits<double>::infinity();
    return out;
  }
  if (out.status != Status::Converged) {
    out.disc_err = std::fabs(integral);
    return out;
  }

  double diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= kMaxLevel; ++level) {
    const std::size_t per_level = static_cast<std::size_t>(kmax[0] + kmax[1]) << (level - 1);
    if (out.evals + per_level > max_evals) {
      out.status = Status::MaxEvals;
      out.disc_err = diff;
      return out;
    }
    const double hn = h / 2.0;
    double s_new = 0.0;
    double e_new = 0.0;
    double a_new = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      const double t_end = kmax[side] * h0;
      for (long i = 1;; i += 2) {
        const double t = i * hn;
        if (t > t_end) break;
        double v, e;
        if (!term(sign * t, v, e)) {
          out.status = Status::DivergentSuspected;
          out.disc_err = std::numeric_limits<double>::infinity();
          return out;
        }
        s_new += v;
        e_new += e;
        a_new += std::fabs(v);
      }
    }
    const double next = 0.5 * integral + hn * s_new;
    nested = 0.5 * nested + hn * e_new;
    magnitude = 0.5 * magnitude + hn * a_new;
    diff = std::fabs(next - integral);
    integral = next;
    h = hn;
    out.value = integral;
    out.nested_err = nested;
    out.disc_err = diff;
    // Cancellation between large terms puts a floor under diff; past it,
    // further halving only burns evaluations.
    const double roundoff = kRoundoff * magnitude;
    if (level >= kMinLevel && diff <= std::max(target(integral), roundoff)) {
      if (diff <= target(integral)) {
        out.status = Status::Converged;
      } else {
        out.status = Status::MaxEvals;
        out.disc_err = std::max(diff, roundoff);
      }
      return out;
    }
  }
  out.status = Status::MaxEvals;
  return out;
}

QuadResult finish(const Core& c, const Target& target, Strategy tag) {
  QuadResult r;
  r.value = c.value;
  r.err_est = c.disc_err + c.nested_err;
  r.evals = c.evals;
  r.strategy_used = tag;
  if (c.status == Status::DivergentSuspected) {
    r.status = Status::DivergentSuspected;
  } else if (c.status == Status::Converged && r.err_est <= target(r.value)) {
    r.status = Status::Converged;
  } else {
    r.status = Status::MaxEvals;
  }
  return r;
}

NestedIntegrand lift(const Integrand& f) {
  return [&f](double x) { return Sample{f(x), 0.0}; };
}

Status worse(Status a, Status b) {
  if (a == Status::DivergentSuspected || b == Status::DivergentSuspected) return Status::DivergentSuspected;
  if (a == Status::MaxEvals || b == Status::MaxEvals) return Status::MaxEvals;
  return Status::Converged;
}

QuadResult oscillatory_core(const NestedIntegrand& f, double period, const QuadOptions& opts, bool damped,
                            Strategy tag) {
  const Target target{opts.rel_tol, opts.abs_tol};
  const Target cell_target{std::max(opts.rel_tol * 1e-3, 1e-14), opts.abs_tol * 1e-3};
  const double half = period / 2.0;
  const double inv_power = 1.0 / opts.oscillation_power;
  double phase = std::fmod(opts.oscillation_phase, half);
  if (phase < 0.0) phase += half;
  // Cell boundaries are the exact zeros of the oscillating factor.
  const long first = phase > 0.0 ? 0 : 1;
  auto zero = [&](long k) { return std::pow(phase + static_cast<double>(k) * half, inv_power); };

  constexpr int kSkip = 2;        // leading cells excluded from averaging
  constexpr int kMinCells = 10;   // cells averaged before any estimate is trusted
  constexpr int kWindow = 20;     // partial sums entering the repeated averaging
  constexpr long kMaxCells = 20000;

  QuadResult r;
  r.strategy_used = tag;
  std::vector<double> partial;
  std::vector<double> magnitude;
  double running = 0.0;
  double cell_err = 0.0;
  double cell_sum = 0.0;
  std::size_t last_cell_evals = 0;
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  double prev_diff = std::numeric_limits<double>::infinity();
  double lo = 0.0;

  // Ratio of mean cell magnitude in the last quarter to the first quarter.
  auto decay_ratio = [&]() {
    const std::size_t n = magnitude.size() - kSkip;
    const std::size_t q = std::max<std::size_t>(n / 4, 1);
    double head = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      head += magnitude[kSkip + i];
      tail += magnitude[magnitude.size() - 1 - i];
    }
    if (head == 0.0) return tail == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return tail / head;
  };

  for (long k = 0; k < kMaxCells; ++k) {
    const double hi = zero(first + k);
    // Stop before a cell could be cut short by the budget.
    if (r.evals + 2 * last_cell_evals + 200 > opts.max_evals) break;
    const Core c = de_core(f, TanhSinh{lo, hi}, cell_target, opts.max_evals - r.evals);
    r.evals += c.evals;
    last_cell_evals = c.evals;
    if (c.status == Status::DivergentSuspected) {
      r.value = running + c.value;
      r.err_est = std::numeric_limits<double>::infinity();
      r.status = Status::DivergentSuspected;
      return r;
    }
    running += c.value;
    cell_err += c.disc_err + c.nested_err;
    cell_sum += std::fabs(c.value);
    partial.push_back(running);
    magnitude.push_back(std::fabs(c.value));
    lo = hi;

    const long avail = static_cast<long>(partial.size()) - kSkip;
    if (avail < kMinCells) continue;

    if (!damped && decay_ratio() >= 1.5) {
      r.value = running;
      r.err_est = std::numeric_limits<double>::infinity();
      r.status = Status::DivergentSuspected;
      return r;
    }

    // Repeated averaging (Euler / van Wijngaarden) of the last partial sums.
    const long m = std::min<long>(avail, kWindow);
    std::vector<double> row(partial.end() - m, partial.end());
    for (long len = m; len > 1; --len) {
      for (long i = 0; i + 1 < len; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    }
    const double est = row[0];
    const double diff = std::isnan(prev_est) ? std::numeric_limits<double>::infinity() : std::fabs(est - prev_est);
    prev_est = est;
    const double roundoff = kRoundoff * cell_sum;
    r.value = est;
    r.err_est = std::max(diff, prev_diff) + cell_err + roundoff;
    const bool settled = std::max(diff, prev_diff) <= 0.5 * std::max(target(est), roundoff);
    prev_diff = diff;
    if (settled) {
      if (!damped && decay_ratio() >= 0.95) {
        r.status = Status::DivergentSuspected;
        return r;
      }
      r.status = r.err_est <= target(est) ? Status::Converged : Status::MaxEvals;
      return r;
    }
  }
  // Ran out of cells or evaluations before the averaged sums settled.
  r.status = Status::MaxEvals;
  if (std::isnan(prev_est)) {
    r.value = running;
    r.err_est = std::numeric_limits<double>::infinity();
  }
  if (!damped && magnitude.size() > kSkip + 4 && decay_ratio() >= 0.95) {
    r.status = Status::DivergentSuspected;
  }
  return r;
}

QuadResult abel_core(const NestedIntegrand& f, const QuadOptions& opts) {
  const int rungs = opts.abel_rungs;
  QuadOptions rung_opts = opts;
  rung_opts.rel_tol = opts.rel_tol / 10.0;
  rung_opts.abs_tol = opts.abs_tol / 10.0;

  std::vector<double> eps(rungs);
  std::vector<double> vals(rungs);
  std::vector<double> errs(rungs);
  QuadResult r;
  r.strategy_used = Strategy::Abel;
  Status rung_status = Status::Converged;
  for (int j = 0; j < rungs; ++j) {
    eps[j] = opts.abel_eps0 / std::ldexp(1.0, j);
    const double e = eps[j];
    NestedIntegrand damped = [&f, e](double x) {
      const Sample s = f(x);
      const double d = std::exp(-e * x);
      // 0 * inf would poison the sum once the damping has underflowed.
      if (d == 0.0) return Sample{0.0, 0.0};
      return Sample{s.value * d, s.err * d};
    };
    rung_opts.max_evals = opts.max_evals - r.evals;
    if (rung_opts.max_evals < 1000) {
      r.status = Status::MaxEvals;
      r.value = j > 0 ? vals[j - 1] : 0.0;
      r.err_est = std::numeric_limits<double>::infinity();
      return r;
    }
    QuadResult q;
    if (opts.oscillation_period_hint) {
      q = oscillatory_core(damped, *opts.oscillation_period_hint, rung_opts, true, Strategy::Oscillatory);
    } else {
      const Target t{rung_opts.rel_tol, rung_opts.abs_tol};
      q = finish(de_core(damped, ExpSinh{}, t, rung_opts.max_evals), t, Strategy::Decay);
    }
    r.evals += q.evals;
    vals[j] = q.value;
    errs[j] = q.err_est;
    rung_status = worse(rung_status, q.status);
    if (q.status == Status::DivergentSuspected) {
      r.value = q.value;
      r.err_est = std::numeric_limits<double>::infinity();
      r.status = Status::DivergentSuspected;
      return r;
    }
  }

  // Neville table for the polynomial through (eps_j, vals_j), evaluated at 0.
  std::vector<std::vector<double>> table(rungs, std::vector<double>(rungs, 0.0));
  for (int i = 0; i < rungs; ++i) {
    table[i][0] = vals[i];
    for (int k = 1; k <= i; ++k) {
      table[i][k] = (eps[i - k] * table[i][k - 1] - eps[i] * table[i - 1][k - 1]) / (eps[i - k] - eps[i]);
    }
  }

  // Lagrange weights at 0 bound how rung errors propagate into the result.
  double amplified = 0.0;
  for (int j = 0; j < rungs; ++j) {
    double w = 1.0;
    for (int i = 0; i < rungs; ++i) {
      if (i != j) w *= eps[i] / (eps[i] - eps[j]);
    }
    amplified += std::fabs(w) * errs[j];
  }

  const double value = table[rungs - 1][rungs - 1];
  const double noise = 10.0 * amplified + 1e3 * std::numeric_limits<double>::epsilon() * std::fabs(value);
  std::vector<double> d(rungs, 0.0);
  for (int k = 1; k < rungs; ++k) d[k] = std::fabs(table[k][k] - table[k - 1][k - 1]);
  bool monotone = true;
  for (int k = 2; k < rungs; ++k) {
    if (d[k - 1] > noise && d[k] > noise && d[k] > d[k - 1]) monotone = false;
  }

  r.value = value;
  r.err_est = d[rungs - 1] + amplified;
  const Target target{opts.rel_tol, opts.abs_tol};
  if (!monotone) {
    r.status = Status::DivergentSuspected;
  } else if (rung_status == Status::Converged && r.err_est <= target(value)) {
    r.status = Status::Converged;
  } else {
    r.status = Status::MaxEvals;
  }
  return r;
}

QuadResult algebraic_core(const NestedIntegrand& f, const QuadOptions& opts) {
  const double s = opts.split_point.value_or(1.0);
  const Target target{opts.rel_tol, opts.abs_tol};
  const Target part_target{opts.rel_tol / 2.0, opts.abs_tol / 2.0};

  const Core head = de_core(f, TanhSinh{0.0, s}, part_target, opts.max_evals);
  // Tail: x = s/t sends [s, inf) onto (0, 1]; dx = s/t^2 dt = x (x/s) dt.
  NestedIntegrand tail_f = [&f, s](double t) {
    const double x = s / t;
    const Sample v = f(x);
    const double jac_a = x;
    const double jac_b = x / s;
    return Sample{v.value * jac_a * jac_b, v.err * jac_a * jac_b};
  };
  const std::size_t left = opts.max_evals > head.evals ? opts.max_evals - head.evals : 0;
  Core tail;
  if (left < 100) {
    tail.status = Status::MaxEvals;
    tail.disc_err = std::numeric_limits<double>::infinity();
  } else {
    tail = de_core(tail_f, TanhSinh{0.0, 1.0}, part_target, left);
  }

  Core both;
  both.value = head.value + tail.value;
  both.disc_err = head.disc_err + tail.disc_err;
  both.nested_err = head.nested_err + tail.nested_err;
  both.evals = head.evals + tail.evals;
  both.status = worse(head.status, tail.status);
  return finish(both, target, Strategy::Algebraic);
}

}  // namespace

QuadResult integrate_decay(const NestedIntegrand& f, const QuadOptions& opts) {
  opts.validate();
  const Target target{opts.rel_tol, opts.abs_tol};
  return finish(de_core(f, ExpSinh{}, target, opts.max_evals), target, Strategy::Decay);
}

QuadResult integrate_algebraic(const NestedIntegrand& f, const QuadOptions& opts) {
  opts.validate();
  return algebraic_core(f, opts);
}

QuadResult integrate_oscillatory(const NestedIntegrand& f, double period, const QuadOptions& opts) {
  opts.validate();
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("integrate_oscillatory: period must be positive");
  return oscillatory_core(f, period, opts, false, Strategy::Oscillatory);
}

QuadResult integrate_abel(const NestedIntegrand& f, const QuadOptions& opts) {
  opts.validate();
  return abel_core(f, opts);
}

QuadResult integrate(const NestedIntegrand& f, const QuadOptions& opts) {
  switch (opts.strategy) {
    case Strategy::Decay: return integrate_decay(f, opts);
    case Strategy::Algebraic: return integrate_algebraic(f, opts);
    case Strategy::Oscillatory:
      opts.validate();
      return integrate_oscillatory(f, *opts.oscillation_period_hint, opts);
    case Strategy::Abel: return integrate_abel(f, opts);
    case Strategy::Auto: break;
  }
  throw UnclassifiedError("integrate: strategy AUTO needs a decay classification; pick a strategy");
}

QuadResult integrate_decay(const Integrand& f, const QuadOptions& opts) { return integrate_decay(lift(f), opts); }
QuadResult integrate_algebraic(const Integrand& f, const QuadOptions& opts) {
  return integrate_algebraic(lift(f), opts);
}
QuadResult integrate_oscillatory(const Integrand& f, double period, const QuadOptions& opts) {
  return integrate_oscillatory(lift(f), period, opts);
}
QuadResult integrate_abel(const Integrand& f, const QuadOptions& opts) { return integrate_abel(lift(f), opts); }
QuadResult integrate(const Integrand& f, const QuadOptions& opts) { return integrate(lift(f), opts); }

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts) {
  opts.validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate_finite: need finite a < b");
  }
  const Target target{opts.rel_tol, opts.abs_tol};
  return finish(de_core(lift(f), TanhSinh{a, b}, target, opts.max_evals), target, Strategy::Auto);
}

QuadResult integrate_auto(const Integrand& f, const expr::DecayClass& hint, const QuadOptions& opts) {
  if (opts.strategy != Strategy::Auto) return integrate(f, opts);
  QuadOptions o = opts;
  switch (hint.kind) {
    case expr::DecayKind::ExpDecay:
      o.strategy = Strategy::Decay;
      return integrate_decay(f, o);
    case expr::DecayKind::Algebraic:
      o.strategy = Strategy::Algebraic;
      return integrate_algebraic(f, o);
    case expr::DecayKind::Oscillatory:
      o.strategy = Strategy::Oscillatory;
      o.oscillation_period_hint = hint.period;
      o.oscillation_phase = hint.phase;
      o.oscillation_power = hint.power;
      return integrate_oscillatory(f, hint.period, o);
    case expr::DecayKind::BoundedUnknown: break;
  }
  throw UnclassifiedError("integrand is UNCLASSIFIED: no decay structure recognised; choose a strategy explicitly");
}

namespace detail {

QuadResult integrate_oscillatory_damped(const NestedIntegrand& f, double period, const QuadOptions& opts) {
  opts.validate();
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("integrate_oscillatory: period must be positive");
  return oscillatory_core(f, period, opts, true, Strategy::Oscillatory);
}

}  // namespace detail

}  // namespace gptrans::quad

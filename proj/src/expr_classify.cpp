#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <optional>
#include <vector>

#include "gptrans/expr.hpp"

namespace gptrans::expr {

std::string to_string(const DecayClass& d) {
  char buf[160];
  switch (d.kind) {
    case DecayKind::ExpDecay:
      std::snprintf(buf, sizeof buf, "EXP_DECAY(rate=%.6g, power=%.6g)", d.rate, d.power);
      return buf;
    case DecayKind::Algebraic:
      std::snprintf(buf, sizeof buf, "ALGEBRAIC(tail=x^%.6g)", d.tail_exponent);
      return buf;
    case DecayKind::Oscillatory:
      std::snprintf(buf, sizeof buf, "OSCILLATORY(period=%.6g in t=x^%.6g, phase=%.6g, tail=x^%.6g)", d.period,
                    d.power, d.phase, d.tail_exponent);
      return buf;
    case DecayKind::BoundedUnknown: return "BOUNDED_UNKNOWN";
  }
  return "?";
}

namespace {

struct Mono {
  double coef;
  double power;
};

// e as a finite sum of c * x^p terms, if it has that shape.
std::optional<std::vector<Mono>> monomials(const Expr& e) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Number: return std::vector<Mono>{{n.value, 0.0}};
    case Op::Var: return std::vector<Mono>{{1.0, 1.0}};
    case Op::Neg: {
      auto m = monomials(n.args[0]);
      if (!m) return std::nullopt;
      for (auto& t : *m) t.coef = -t.coef;
      return m;
    }
    case Op::Add:
    case Op::Sub: {
      auto a = monomials(n.args[0]);
      auto b = monomials(n.args[1]);
      if (!a || !b) return std::nullopt;
      for (auto t : *b) {
        if (n.op == Op::Sub) t.coef = -t.coef;
        a->push_back(t);
      }
      return a;
    }
    case Op::Mul: {
      auto a = monomials(n.args[0]);
      auto b = monomials(n.args[1]);
      if (!a || !b || a->size() * b->size() > 64) return std::nullopt;
      std::vector<Mono> out;
      for (const auto& s : *a) {
        for (const auto& t : *b) out.push_back({s.coef * t.coef, s.power + t.power});
      }
      return out;
    }
    case Op::Div: {
      auto a = monomials(n.args[0]);
      auto b = monomials(n.args[1]);
      if (!a || !b || b->size() != 1 || b->front().coef == 0.0) return std::nullopt;
      for (auto& t : *a) {
        t.coef /= b->front().coef;
        t.power -= b->front().power;
      }
      return a;
    }
    case Op::Pow: {
      if (n.args[1].op() != Op::Number) return std::nullopt;
      const double k = n.args[1].node().value;
      auto a = monomials(n.args[0]);
      if (!a || a->size() != 1) return std::nullopt;
      const Mono t = a->front();
      if (t.coef < 0.0 && k != std::trunc(k)) return std::nullopt;
      return std::vector<Mono>{{std::pow(t.coef, k), t.power * k}};
    }
    default: return std::nullopt;
  }
}

// Highest-power term with a non-zero coefficient, equal powers merged.
std::optional<Mono> leading(const std::vector<Mono>& terms) {
  std::optional<Mono> best;
  for (const auto& t : terms) {
    if (!best || t.power > best->power) {
      double c = 0.0;
      for (const auto& u : terms) {
        if (u.power == t.power) c += u.coef;
      }
      if (c != 0.0) best = Mono{c, t.power};
    }
  }
  return best;
}

enum class FKind { Algebraic, Exp, Osc, Bounded, Unknown };

struct Factor {
  FKind kind = FKind::Unknown;
  double q = 0.0;      // Algebraic: x^q
  Mono exp{0.0, 0.0};  // Exp: exp(coef * x^power), leading term
  double period = 0.0, power = 1.0, phase = 0.0;
};

Factor unknown() { return {}; }

Factor algebraic(double q) {
  Factor f;
  f.kind = FKind::Algebraic;
  f.q = q;
  return f;
}

Factor raise(Factor f, double m) {
  switch (f.kind) {
    case FKind::Algebraic: f.q *= m; return f;
    case FKind::Exp: f.exp.coef *= m; return f;
    case FKind::Osc: return m == 1.0 ? f : unknown();
    case FKind::Bounded: return m > 0.0 ? f : unknown();
    case FKind::Unknown: return f;
  }
  return f;
}

DecayClass combine(const std::vector<Factor>& factors);
Factor analyze(const Expr& e);

void flatten(const Expr& e, double mult, std::vector<std::pair<Expr, double>>& out) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Mul:
      flatten(n.args[0], mult, out);
      flatten(n.args[1], mult, out);
      return;
    case Op::Div:
      flatten(n.args[0], mult, out);
      flatten(n.args[1], -mult, out);
      return;
    case Op::Neg: flatten(n.args[0], mult, out); return;
    default:
      if (e.depends_on_x()) out.emplace_back(e, mult);
  }
}

std::vector<Factor> factors_of(const Expr& e) {
  std::vector<std::pair<Expr, double>> parts;
  flatten(e, 1.0, parts);
  std::vector<Factor> out;
  for (const auto& [part, mult] : parts) out.push_back(raise(analyze(part), mult));
  return out;
}

Factor from_class(const DecayClass& d) {
  Factor f;
  switch (d.kind) {
    case DecayKind::ExpDecay:
      f.kind = FKind::Exp;
      f.exp = {-d.rate, d.power};
      return f;
    case DecayKind::Algebraic: return algebraic(d.tail_exponent);
    default: return unknown();
  }
}

Factor analyze_sum(const Expr& e) {
  if (auto m = monomials(e)) {
    auto lead = leading(*m);
    if (!lead) return unknown();
    return lead->coef > 0.0 ? algebraic(lead->power) : unknown();
  }
  // A sum of non-polynomial terms: the slowest-decaying term governs.
  const Node& n = e.node();
  const DecayClass a = combine(factors_of(n.args[0]));
  const DecayClass b = combine(factors_of(n.args[1]));
  if (a.kind == DecayKind::ExpDecay && b.kind == DecayKind::ExpDecay) {
    if (a.power != b.power) return from_class(a.power < b.power ? a : b);
    return from_class(a.rate < b.rate ? a : b);
  }
  auto tail = [](const DecayClass& d) -> std::optional<double> {
    if (d.kind == DecayKind::Algebraic) return d.tail_exponent;
    if (d.kind == DecayKind::ExpDecay) return -std::numeric_limits<double>::infinity();
    return std::nullopt;
  };
  const auto ta = tail(a);
  const auto tb = tail(b);
  if (ta && tb) return algebraic(std::max(*ta, *tb));
  return unknown();
}

Factor analyze(const Expr& e) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Var: return algebraic(1.0);
    case Op::Add:
    case Op::Sub: return analyze_sum(e);
    case Op::Pow: {
      if (n.args[1].op() != Op::Number) return unknown();
      return raise(analyze(n.args[0]), n.args[1].node().value);
    }
    case Op::Mul:
    case Op::Div:
    case Op::Neg: {
      // Nested products reach here only through a power, e.g. (2*x)^3.
      const DecayClass d = combine(factors_of(e));
      return from_class(d);
    }
    case Op::Call: break;
    default: return unknown();
  }
  const Expr& arg = n.args.back();
  switch (n.func) {
    case Func::Exp: {
      auto m = monomials(arg);
      if (!m) return unknown();
      auto lead = leading(*m);
      if (!lead || lead->power <= 0.0) return unknown();
      Factor f;
      f.kind = FKind::Exp;
      f.exp = *lead;
      return f;
    }
    case Func::Sin:
    case Func::Cos: {
      auto m = monomials(arg);
      if (!m || m->size() != 1) return unknown();
      const Mono t = m->front();
      if (t.coef == 0.0 || t.power <= 0.0) return unknown();
      Factor f;
      f.kind = FKind::Osc;
      const double c = std::fabs(t.coef);
      f.period = 2.0 * std::numbers::pi / c;
      f.power = t.power;
      f.phase = n.func == Func::Sin ? 0.0 : std::numbers::pi / (2.0 * c);
      return f;
    }
    case Func::Sqrt: return raise(analyze(arg), 0.5);
    case Func::Abs: {
      const Factor f = analyze(arg);
      return f.kind == FKind::Algebraic ? f : unknown();
    }
    case Func::Ln: return algebraic(0.0);
    case Func::Erfc:
    case Func::Erfcx:
    case Func::Besselj:
    case Func::E1: {
      Factor f;
      f.kind = FKind::Bounded;
      return f;
    }
    case Func::Gamma: return unknown();
  }
  return unknown();
}

DecayClass combine(const std::vector<Factor>& factors) {
  std::optional<Mono> exp_lead;
  double q = 0.0;
  int oscillating = 0;
  Factor osc;
  bool bounded = false;
  bool unknown_factor = false;
  for (const auto& f : factors) {
    switch (f.kind) {
      case FKind::Algebraic: q += f.q; break;
      case FKind::Exp:
        if (!exp_lead || f.exp.power > exp_lead->power) {
          exp_lead = f.exp;
        } else if (f.exp.power == exp_lead->power) {
          exp_lead->coef += f.exp.coef;
        }
        break;
      case FKind::Osc:
        ++oscillating;
        osc = f;
        break;
      case FKind::Bounded: bounded = true; break;
      case FKind::Unknown: unknown_factor = true; break;
    }
  }
  if (exp_lead && exp_lead->coef != 0.0) {
    if (exp_lead->coef > 0.0 || unknown_factor) return DecayClass::unknown();
    return DecayClass::exp_decay(-exp_lead->coef, exp_lead->power);
  }
  if (unknown_factor || oscillating > 1) return DecayClass::unknown();
  if (oscillating == 1) return DecayClass::oscillatory(osc.period, osc.power, osc.phase, q);
  if (bounded) return DecayClass::unknown();
  return DecayClass::algebraic(q);
}

}  // namespace

DecayClass classify_decay(const Expr& e, const ParamMap& params) {
  return combine(factors_of(bind(e, params)));
}

}  // namespace gptrans::expr

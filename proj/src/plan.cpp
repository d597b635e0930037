#include "gptrans/plan.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gptrans::catalog {

using quad::QuadOptions;
using quad::Sample;
using quad::Status;

Plan fn(const expr::Expr& e) {
  auto n = std::make_shared<PlanNode>();
  n->op = PlanOp::Fn;
  n->expr = e;
  return n;
}

Plan fn(std::string_view src) { return fn(expr::parse(src)); }

Plan constant(double c) { return fn(expr::Expr::number(c)); }

Plan transform(const transforms::TransformKind& kind, Plan body, const expr::Expr& point, bool raw) {
  auto n = std::make_shared<PlanNode>();
  n->op = PlanOp::Transform;
  n->kind = kind;
  n->expr = point;
  n->raw = raw;
  n->args.push_back(std::move(body));
  return n;
}

Plan transform(const transforms::TransformKind& kind, Plan body, std::string_view point, bool raw) {
  return transform(kind, std::move(body), expr::parse(point), raw);
}

Plan integral(Plan body, quad::Strategy strategy, std::optional<double> split) {
  auto n = std::make_shared<PlanNode>();
  n->op = PlanOp::Integral;
  n->strategy = strategy;
  n->split = split;
  n->args.push_back(std::move(body));
  return n;
}

Plan product(std::vector<Plan> factors) {
  auto n = std::make_shared<PlanNode>();
  n->op = PlanOp::Product;
  n->args = std::move(factors);
  return n;
}

Plan sum(std::vector<Plan> terms) {
  auto n = std::make_shared<PlanNode>();
  n->op = PlanOp::Sum;
  n->args = std::move(terms);
  return n;
}

Plan scale(double c, Plan p) { return product({constant(c), std::move(p)}); }

std::optional<expr::Expr> as_expr(const Plan& p) {
  switch (p->op) {
    case PlanOp::Fn: return p->expr;
    case PlanOp::Product:
    case PlanOp::Sum: {
      std::optional<expr::Expr> acc;
      const expr::Op op = p->op == PlanOp::Product ? expr::Op::Mul : expr::Op::Add;
      for (const auto& a : p->args) {
        auto e = as_expr(a);
        if (!e) return std::nullopt;
        acc = acc ? expr::Expr::binary(op, *acc, *e) : *e;
      }
      return acc;
    }
    default: return std::nullopt;
  }
}

std::string describe(const Plan& p) {
  switch (p->op) {
    case PlanOp::Fn: return p->expr.to_string();
    case PlanOp::Transform:
      return p->kind->name() + (p->raw ? "/raw" : "") + "[" + describe(p->args[0]) + "](" + p->expr.to_string() +
             ")";
    case PlanOp::Integral: {
      std::string s = "int[" + describe(p->args[0]) + "]";
      if (p->strategy != quad::Strategy::Auto) s += "/" + std::string(quad::to_string(p->strategy));
      return s;
    }
    case PlanOp::Product:
    case PlanOp::Sum: {
      std::string s = p->op == PlanOp::Sum ? "(" : "";
      for (std::size_t i = 0; i < p->args.size(); ++i) {
        if (i) s += p->op == PlanOp::Product ? " * " : " + ";
        const bool wrap = p->op == PlanOp::Product && p->args[i]->op == PlanOp::Fn;
        s += wrap ? "(" + describe(p->args[i]) + ")" : describe(p->args[i]);
      }
      return p->op == PlanOp::Sum ? s + ")" : s;
    }
  }
  return "?";
}

bool PlanResult::ok() const { return status == Status::Converged && std::isfinite(value); }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Status worse(Status a, Status b) {
  auto rank = [](Status s) { return s == Status::Converged ? 0 : s == Status::MaxEvals ? 1 : 2; };
  return rank(a) >= rank(b) ? a : b;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class RNode {
 public:
  virtual ~RNode() = default;
  virtual PlanResult at(double x, const QuadOptions& o) = 0;
};

using RPtr = std::unique_ptr<RNode>;

RPtr instantiate(const Plan& p, const expr::ParamMap& params);

class RFn final : public RNode {
 public:
  explicit RFn(expr::Compiled c) : c_(std::move(c)) {}
  PlanResult at(double x, const QuadOptions&) override { return {c_(x), 0.0, 0, Status::Converged, {}}; }

 private:
  expr::Compiled c_;
};

// First failing inner evaluation, reported only if it spoils the outer result.
struct FailureLog {
  bool seen = false;
  double at = 0.0;
  std::string detail;

  Sample check(double x, const PlanResult& r) {
    if (r.status == Status::DivergentSuspected || !std::isfinite(r.value)) {
      if (!seen) {
        seen = true;
        at = x;
        detail = r.note.empty() ? std::string(quad::to_string(r.status)) : r.note;
      }
      return {kNaN, kNaN};
    }
    return {r.value, r.err_est};
  }

  void annotate(PlanResult& outer) const {
    if (seen && !outer.ok()) {
      outer.status = Status::DivergentSuspected;
      outer.note = "inner transform failed at y = " + format_double(at) + " (" + detail + ")";
    }
  }
};

PlanResult from_quad(const quad::QuadResult& r) { return {r.value, r.err_est, r.evals, r.status, {}}; }

// An integrand that is either a compiled expression or a nested plan.
struct Body {
  std::optional<expr::Compiled> pure;
  RPtr nested;
  expr::DecayClass cls;
  FailureLog log;

  Body(const Plan& p, const expr::ParamMap& params) {
    if (auto e = as_expr(p)) {
      pure = expr::compile(*e, params);
      cls = expr::classify_decay(*e, params);
      return;
    }
    nested = instantiate(p, params);
    // The pure factors of a product still tell how the integrand decays.
    if (p->op == PlanOp::Product) {
      std::optional<expr::Expr> weight;
      for (const auto& a : p->args) {
        if (auto e = as_expr(a)) weight = weight ? expr::Expr::binary(expr::Op::Mul, *weight, *e) : *e;
      }
      if (weight) cls = expr::classify_decay(*weight, params);
    }
  }

  quad::NestedIntegrand integrand(const QuadOptions& inner) {
    log = {};
    if (pure) {
      const expr::Compiled* c = &*pure;
      return [c](double t) { return Sample{(*c)(t), 0.0}; };
    }
    return [this, inner](double t) { return log.check(t, nested->at(t, inner)); };
  }
};

class RTransform final : public RNode {
 public:
  RTransform(const Plan& p, const expr::ParamMap& params)
      : kind_(*p->kind), point_(expr::compile(p->expr, params)), raw_(p->raw), body_(p->args[0], params) {}

  PlanResult at(double x, const QuadOptions& o) override {
    const double y = point_(x);
    const auto g = body_.integrand(transforms::inner_options(o));
    PlanResult r = from_quad(transforms::apply(kind_, g, body_.cls, y, o, raw_));
    body_.log.annotate(r);
    return r;
  }

 private:
  transforms::TransformKind kind_;
  expr::Compiled point_;
  bool raw_;
  Body body_;
};

class RIntegral final : public RNode {
 public:
  RIntegral(const Plan& p, const expr::ParamMap& params)
      : strategy_(p->strategy), split_(p->split), body_(p->args[0], params) {}

  PlanResult at(double, const QuadOptions& o) override {
    QuadOptions q = o;
    const expr::DecayClass& cls = body_.cls;
    const bool oscillating = cls.kind == expr::DecayKind::Oscillatory;
    quad::Strategy s = strategy_;
    if (s == quad::Strategy::Auto) {
      s = cls.kind == expr::DecayKind::ExpDecay ? quad::Strategy::Decay
          : oscillating                         ? quad::Strategy::Oscillatory
                                                : quad::Strategy::Algebraic;
    }
    q.strategy = s;
    q.split_point = split_.value_or(1.0);
    if (oscillating) {
      q.oscillation_period_hint = cls.period;
      q.oscillation_phase = cls.phase;
      q.oscillation_power = cls.power;
    } else if (s == quad::Strategy::Oscillatory) {
      throw std::invalid_argument("oscillatory integral over a body with no recognizable oscillation");
    }
    const auto g = body_.integrand(transforms::inner_options(o));
    PlanResult r = from_quad(quad::integrate(g, q));
    body_.log.annotate(r);
    return r;
  }

 private:
  quad::Strategy strategy_;
  std::optional<double> split_;
  Body body_;
};

class RCombine final : public RNode {
 public:
  RCombine(const Plan& p, const expr::ParamMap& params) : product_(p->op == PlanOp::Product) {
    for (const auto& a : p->args) parts_.push_back(instantiate(a, params));
  }

  PlanResult at(double x, const QuadOptions& o) override {
    PlanResult acc{product_ ? 1.0 : 0.0, 0.0, 0, Status::Converged, {}};
    for (const auto& part : parts_) {
      const PlanResult r = part->at(x, o);
      if (product_) {
        acc.err_est = std::fabs(acc.value) * r.err_est + std::fabs(r.value) * acc.err_est;
        acc.value *= r.value;
      } else {
        acc.value += r.value;
        acc.err_est += r.err_est;
      }
      acc.evals += r.evals;
      acc.status = worse(acc.status, r.status);
      if (acc.note.empty()) acc.note = r.note;
      // A vanishing weight makes the remaining factors irrelevant.
      if (product_ && acc.value == 0.0 && acc.err_est == 0.0) break;
    }
    return acc;
  }

 private:
  bool product_;
  std::vector<RPtr> parts_;
};

RPtr instantiate(const Plan& p, const expr::ParamMap& params) {
  if (auto e = as_expr(p)) return std::make_unique<RFn>(expr::compile(*e, params));
  switch (p->op) {
    case PlanOp::Transform: return std::make_unique<RTransform>(p, params);
    case PlanOp::Integral: return std::make_unique<RIntegral>(p, params);
    default: return std::make_unique<RCombine>(p, params);
  }
}

}  // namespace

PlanResult evaluate(const Plan& p, const expr::ParamMap& params, const QuadOptions& opts) {
  opts.validate();
  const RPtr root = instantiate(p, params);
  return root->at(kNaN, opts);
}

}  // namespace gptrans::catalog

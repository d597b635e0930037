#include "gptrans/transforms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace gptrans::transforms {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TransformKind::TransformKind(Kind kind, int n) : kind_(kind), n_(1) {
  switch (kind) {
    case Kind::Ln:
    case Kind::Pn:
      if (!is_power_of_two(n)) {
        throw InvalidOrder("n must be a power of two (n = 2^k, k >= 0), got " + std::to_string(n));
      }
      n_ = n;
      break;
    case Kind::L2n:
    case Kind::P2n:
      if (n < 1) throw InvalidOrder("n must be a positive integer, got " + std::to_string(n));
      n_ = n;
      break;
    default: break;
  }
}

int TransformKind::substitution_power() const {
  switch (kind_) {
    case Kind::Laplace:
    case Kind::Stieltjes: return 1;
    case Kind::L2:
    case Kind::Widder: return 2;
    case Kind::Ln:
    case Kind::Pn: return n_;
    case Kind::L2n:
    case Kind::P2n: return 2 * n_;
  }
  return 1;
}

bool TransformKind::laplace_type() const {
  return kind_ == Kind::Laplace || kind_ == Kind::L2 || kind_ == Kind::Ln || kind_ == Kind::L2n;
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Laplace: return "laplace";
    case Kind::L2: return "l2";
    case Kind::Ln: return "ln";
    case Kind::L2n: return "l2n";
    case Kind::Stieltjes: return "stieltjes";
    case Kind::Pn: return "pn";
    case Kind::P2n: return "p2n";
    case Kind::Widder: return "widder";
  }
  return "?";
}

std::string TransformKind::name() const {
  std::string s(kind_name(kind_));
  if (kind_ == Kind::Ln || kind_ == Kind::Pn || kind_ == Kind::L2n || kind_ == Kind::P2n) {
    s += "(n=" + std::to_string(n_) + ")";
  }
  return s;
}

std::optional<Kind> parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Kind k : {Kind::Laplace, Kind::L2, Kind::Ln, Kind::L2n, Kind::Stieltjes, Kind::Pn, Kind::P2n, Kind::Widder}) {
    if (kind_name(k) == lower) return k;
  }
  if (lower == "l") return Kind::Laplace;
  if (lower == "s") return Kind::Stieltjes;
  if (lower == "p") return Kind::Widder;
  return std::nullopt;
}

double kernel(const TransformKind& kind, double x, double y) {
  const int m = kind.substitution_power();
  if (kind.laplace_type()) {
    // x^{m-1} exp(-(xy)^m), in log form once x^{m-1} could overflow.
    const double e = m == 1 ? x * y : std::pow(x * y, m);
    if (m == 1) return std::exp(-e);
    if (x <= 1.0) return std::pow(x, m - 1) * std::exp(-e);
    return std::exp((m - 1) * std::log(x) - e);
  }
  // x^{m-1}/(x^m + y^m), scaled by the larger of x and y.
  if (x >= y) {
    const double r = m == 1 ? y / x : std::pow(y / x, m);
    return 1.0 / (x * (1.0 + r));
  }
  const double r = x / y;
  const double rm1 = m == 1 ? 1.0 : std::pow(r, m - 1);
  return rm1 / (y * (1.0 + rm1 * r));
}

quad::QuadOptions inner_options(const quad::QuadOptions& outer) {
  quad::QuadOptions o = outer;
  o.rel_tol = outer.rel_tol / 10.0;
  // Inner values shrink by orders of magnitude at extreme outer nodes, and
  // the outer factors can amplify them again; an absolute floor there would
  // dominate the nested error. Only the relative target counts.
  o.abs_tol = std::numeric_limits<double>::min();
  o.max_evals = std::max<std::size_t>(outer.max_evals / 100, 20000);
  o.strategy = quad::Strategy::Auto;
  return o;
}

quad::QuadResult apply(const TransformKind& kind, const quad::NestedIntegrand& f, const expr::DecayClass& f_class,
                       double y, const quad::QuadOptions& opts, bool raw) {
  using quad::Sample;
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw std::invalid_argument("transform point must be positive and finite");
  }
  const int m = kind.substitution_power();
  const bool laplace = kind.laplace_type();
  const bool oscillating = f_class.kind == expr::DecayKind::Oscillatory;

  quad::QuadOptions o = opts;
  quad::NestedIntegrand g;
  double scale = 1.0;
  double split = y;
  double osc_power = f_class.power;

  if (raw) {
    g = [&kind, &f, y](double x) {
      const double k = kernel(kind, x, y);
      if (k == 0.0) return Sample{0.0, 0.0};
      const Sample s = f(x);
      return Sample{s.value * k, s.err * k};
    };
  } else {
    double big_y = m == 1 ? y : std::pow(y, m);
    if (!std::isfinite(big_y)) {
      // The kernel vanishes everywhere to double precision.
      quad::QuadResult zero;
      zero.strategy_used = laplace ? quad::Strategy::Decay : quad::Strategy::Algebraic;
      return zero;
    }
    big_y = std::max(big_y, std::numeric_limits<double>::min());
    const double inv_m = 1.0 / m;
    auto root = [m, inv_m](double t) { return m == 1 ? t : std::pow(t, inv_m); };
    if (laplace) {
      g = [&f, big_y, root](double t) {
        const double w = std::exp(-big_y * t);
        if (w == 0.0) return Sample{0.0, 0.0};
        const Sample s = f(root(t));
        return Sample{s.value * w, s.err * w};
      };
    } else {
      g = [&f, big_y, root](double t) {
        const double w = 1.0 / (t + big_y);
        const Sample s = f(root(t));
        return Sample{s.value * w, s.err * w};
      };
    }
    scale = inv_m;
    split = big_y;
    osc_power = f_class.power / m;
  }

  quad::QuadResult r;
  if (oscillating) {
    o.strategy = quad::Strategy::Oscillatory;
    o.oscillation_period_hint = f_class.period;
    o.oscillation_phase = f_class.phase;
    o.oscillation_power = osc_power;
    r = laplace ? quad::detail::integrate_oscillatory_damped(g, f_class.period, o)
                : quad::integrate_oscillatory(g, f_class.period, o);
  } else if (laplace || f_class.kind == expr::DecayKind::ExpDecay) {
    o.strategy = quad::Strategy::Decay;
    r = quad::integrate_decay(g, o);
  } else {
    o.strategy = quad::Strategy::Algebraic;
    o.split_point = split;
    r = quad::integrate_algebraic(g, o);
  }
  r.value *= scale;
  r.err_est *= scale;
  return r;
}

namespace {

quad::NestedIntegrand lift(const expr::Compiled& c) {
  return [&c](double x) { return quad::Sample{c(x), 0.0}; };
}

quad::QuadResult run(const TransformRequest& req, bool raw) {
  req.opts.validate();
  const expr::Compiled f = expr::compile(req.f, req.params);
  const expr::DecayClass cls = expr::classify_decay(req.f, req.params);
  return apply(req.kind, lift(f), cls, req.point, req.opts, raw);
}

// Records the first inner failure so the caller can name the offending node.
struct FailureLog {
  bool seen = false;
  double at = 0.0;
  std::string detail;

  quad::Sample check(double at_node, const quad::QuadResult& r) {
    if (r.status == quad::Status::DivergentSuspected || !std::isfinite(r.value)) {
      if (!seen) {
        seen = true;
        at = at_node;
        detail = std::string(quad::to_string(r.status));
      }
      return {kNaN, kNaN};
    }
    return {r.value, r.err_est};
  }

  void rethrow_if_used(const quad::QuadResult& outer) const {
    if (seen && (outer.status == quad::Status::DivergentSuspected || !std::isfinite(outer.value))) {
      throw InnerFailure(at, detail);
    }
  }
};

std::string format_point(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

InnerFailure::InnerFailure(double at, const std::string& detail)
    : std::runtime_error("inner transform failed at y = " + format_point(at) + " (" + detail + ")"), at_(at) {}

quad::QuadResult eval_transform(const TransformRequest& req) { return run(req, false); }
quad::QuadResult eval_transform_raw(const TransformRequest& req) { return run(req, true); }

quad::QuadResult iterate_l2n(const expr::Expr& f, const expr::ParamMap& params, int n, double z,
                             const quad::QuadOptions& opts) {
  opts.validate();
  const TransformKind k(Kind::L2n, n);
  const expr::Compiled fc = expr::compile(f, params);
  const expr::DecayClass fcls = expr::classify_decay(f, params);
  const quad::QuadOptions in = inner_options(opts);
  const auto fn = lift(fc);
  FailureLog log;
  quad::NestedIntegrand inner = [&](double y) { return log.check(y, apply(k, fn, fcls, y, in)); };
  const quad::QuadResult r = apply(k, inner, expr::DecayClass::unknown(), z, opts);
  log.rethrow_if_used(r);
  return r;
}

ParsevalMembers parseval_members(const expr::Expr& f, const expr::Expr& g, const expr::ParamMap& params, int n,
                                 const quad::QuadOptions& opts) {
  opts.validate();
  const TransformKind l2n(Kind::L2n, n);
  const TransformKind p2n(Kind::P2n, n);
  const int m = 2 * n;
  const expr::Compiled fc = expr::compile(f, params);
  const expr::Compiled gc = expr::compile(g, params);
  const expr::DecayClass fcls = expr::classify_decay(f, params);
  const expr::DecayClass gcls = expr::classify_decay(g, params);
  const quad::QuadOptions in = inner_options(opts);
  const auto fn = lift(fc);
  const auto gn = lift(gc);

  ParsevalMembers out;
  {
    FailureLog log;
    quad::NestedIntegrand body = [&](double y) -> quad::Sample {
      const double w = std::pow(y, m - 1);
      if (w == 0.0) return {0.0, 0.0};
      const quad::Sample a = log.check(y, apply(l2n, fn, fcls, y, in));
      const quad::Sample b = log.check(y, apply(l2n, gn, gcls, y, in));
      return {w * a.value * b.value, w * (std::fabs(a.value) * b.err + std::fabs(b.value) * a.err)};
    };
    quad::QuadOptions o = opts;
    o.split_point = 1.0;
    out.product_of_transforms = quad::integrate_algebraic(body, o);
    log.rethrow_if_used(out.product_of_transforms);
  }

  auto against = [&](const expr::Compiled& outer_fn, const expr::DecayClass& outer_cls, const quad::NestedIntegrand& h,
                     const expr::DecayClass& h_cls) {
    FailureLog log;
    quad::NestedIntegrand body = [&](double x) -> quad::Sample {
      const double w = std::pow(x, m - 1) * outer_fn(x);
      if (w == 0.0) return {0.0, 0.0};
      if (!std::isfinite(w)) return {kNaN, kNaN};
      const quad::Sample p = log.check(x, apply(p2n, h, h_cls, x, in));
      return {w * p.value, std::fabs(w) * p.err};
    };
    quad::QuadResult r;
    if (outer_cls.kind == expr::DecayKind::ExpDecay) {
      r = quad::integrate_decay(body, opts);
    } else {
      quad::QuadOptions o = opts;
      o.split_point = 1.0;
      r = quad::integrate_algebraic(body, o);
    }
    log.rethrow_if_used(r);
    r.value /= m;
    r.err_est /= m;
    return r;
  };
  out.f_against_p2n_g = against(fc, fcls, gn, gcls);
  out.g_against_p2n_f = against(gc, gcls, fn, fcls);
  return out;
}

}  // namespace gptrans::transforms

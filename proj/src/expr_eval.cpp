#include <algorithm>
#include <cmath>
#include <vector>

#include "gptrans/expr.hpp"
#include "gptrans/specfun.hpp"

namespace gptrans::expr {

namespace {

double power(double base, double exponent) {
  if (base < 0.0 && exponent != std::trunc(exponent)) {
    throw specfun::DomainError("non-integer power of a negative base");
  }
  return std::pow(base, exponent);
}

double apply(Func f, double a, double b) {
  switch (f) {
    case Func::Exp: return std::exp(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Sqrt:
      if (a < 0.0) throw specfun::DomainError("sqrt of a negative number");
      return std::sqrt(a);
    case Func::Abs: return std::fabs(a);
    case Func::Ln:
      if (a < 0.0) throw specfun::DomainError("ln of a negative number");
      return std::log(a);
    case Func::Erfc: return specfun::erfc(a);
    case Func::Erfcx: return specfun::erfcx(a);
    case Func::Besselj: return specfun::besselj(a, b);
    case Func::Gamma: return specfun::gamma(a);
    case Func::E1: return specfun::exp_e1(a);
  }
  return std::nan("");
}

double eval_node(const Node& n, double x, const ParamMap& params) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Param: {
      const auto it = params.find(n.name);
      if (it == params.end()) throw UnboundParameter(n.name);
      return it->second;
    }
    case Op::Neg: return -eval_node(n.args[0].node(), x, params);
    case Op::Call: {
      const double a = eval_node(n.args[0].node(), x, params);
      const double b = n.args.size() > 1 ? eval_node(n.args[1].node(), x, params) : 0.0;
      return apply(n.func, a, b);
    }
    default: break;
  }
  const double a = eval_node(n.args[0].node(), x, params);
  const double b = eval_node(n.args[1].node(), x, params);
  switch (n.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return power(a, b);
    default: return std::nan("");
  }
}

bool all_numbers(const std::vector<Expr>& args) {
  for (const auto& a : args) {
    if (a.op() != Op::Number) return false;
  }
  return true;
}

Expr rebuild(const Node& n, std::vector<Expr> args) {
  switch (n.op) {
    case Op::Neg: return Expr::neg(std::move(args[0]));
    case Op::Call: return Expr::call(n.func, std::move(args));
    default: return Expr::binary(n.op, std::move(args[0]), std::move(args[1]));
  }
}

}  // namespace

double eval(const Expr& e, double x, const ParamMap& params) { return eval_node(e.node(), x, params); }

Expr bind(const Expr& e, const ParamMap& params) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Number:
    case Op::Var: return e;
    case Op::Param: {
      const auto it = params.find(n.name);
      return it == params.end() ? e : Expr::number(it->second);
    }
    default: break;
  }
  std::vector<Expr> args;
  args.reserve(n.args.size());
  bool changed = false;
  for (const auto& a : n.args) {
    args.push_back(bind(a, params));
    changed = changed || args.back() != a;
  }
  if (all_numbers(args)) {
    Expr folded = rebuild(n, std::move(args));
    return Expr::number(eval(folded, 0.0));
  }
  return changed ? rebuild(n, std::move(args)) : e;
}

Expr substitute(const Expr& e, const Expr& arg) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Var: return arg;
    case Op::Number:
    case Op::Param: return e;
    default: break;
  }
  std::vector<Expr> args;
  args.reserve(n.args.size());
  for (const auto& a : n.args) args.push_back(substitute(a, arg));
  return rebuild(n, std::move(args));
}

// ---------------------------------------------------------------------------

namespace {

void emit(const Expr& e, std::vector<Compiled::Instr>& code, std::size_t& depth, std::size_t& max_depth) {
  using Code = Compiled::Code;
  const Node& n = e.node();
  auto push = [&](Compiled::Instr in, int delta) {
    code.push_back(in);
    depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
    max_depth = std::max(max_depth, depth);
  };
  switch (n.op) {
    case Op::Number: push({Code::Const, Func::Exp, n.value}, 1); return;
    case Op::Var: push({Code::X, Func::Exp, 0.0}, 1); return;
    case Op::Param: throw UnboundParameter(n.name);
    case Op::Neg:
      emit(n.args[0], code, depth, max_depth);
      push({Code::Neg, Func::Exp, 0.0}, 0);
      return;
    case Op::Call:
      for (const auto& a : n.args) emit(a, code, depth, max_depth);
      if (n.args.size() == 2) {
        push({Code::Call2, n.func, 0.0}, -1);
      } else {
        push({Code::Call1, n.func, 0.0}, 0);
      }
      return;
    default: break;
  }
  emit(n.args[0], code, depth, max_depth);
  emit(n.args[1], code, depth, max_depth);
  Code c = Code::Add;
  switch (n.op) {
    case Op::Sub: c = Code::Sub; break;
    case Op::Mul: c = Code::Mul; break;
    case Op::Div: c = Code::Div; break;
    case Op::Pow: c = Code::Pow; break;
    default: break;
  }
  push({c, Func::Exp, 0.0}, -1);
}

}  // namespace

Compiled compile(const Expr& e, const ParamMap& params) {
  const Expr bound = bind(e, params);
  Compiled out;
  std::size_t depth = 0;
  emit(bound, out.code_, depth, out.depth_);
  return out;
}

double Compiled::operator()(double x) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (depth_ > kInline) {
    heap.resize(depth_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.code) {
      case Code::Const: st[sp++] = in.value; break;
      case Code::X: st[sp++] = x; break;
      case Code::Add: --sp; st[sp - 1] = st[sp - 1] + st[sp]; break;
      case Code::Sub: --sp; st[sp - 1] = st[sp - 1] - st[sp]; break;
      case Code::Mul: --sp; st[sp - 1] = st[sp - 1] * st[sp]; break;
      case Code::Div: --sp; st[sp - 1] = st[sp - 1] / st[sp]; break;
      case Code::Pow: --sp; st[sp - 1] = power(st[sp - 1], st[sp]); break;
      case Code::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Code::Call1: st[sp - 1] = apply(in.func, st[sp - 1], 0.0); break;
      case Code::Call2: --sp; st[sp - 1] = apply(in.func, st[sp - 1], st[sp]); break;
    }
  }
  return st[0];
}

}  // namespace gptrans::expr

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "gptrans/expr.hpp"

namespace gptrans::expr {

namespace {

std::string kind_label(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Lexical: return "lexical error";
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::Arity: return "arity error";
  }
  return "error";
}

struct FuncInfo {
  Func func;
  std::string_view name;
  std::size_t arity;
};

constexpr FuncInfo kFuncs[] = {
    {Func::Exp, "exp", 1},         {Func::Sin, "sin", 1},     {Func::Cos, "cos", 1},
    {Func::Sqrt, "sqrt", 1},       {Func::Abs, "abs", 1},     {Func::Ln, "ln", 1},
    {Func::Erfc, "erfc", 1},       {Func::Erfcx, "erfcx", 1}, {Func::Besselj, "besselj", 2},
    {Func::Gamma, "gamma", 1},     {Func::E1, "e1", 1},
};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail)
    : std::runtime_error(kind_label(kind) + " at position " + std::to_string(position) + ": " + detail),
      kind_(kind),
      position_(position),
      detail_(detail) {}

UnboundParameter::UnboundParameter(const std::string& name)
    : std::runtime_error("unbound parameter '" + name + "'"), name_(name) {}

std::string_view function_name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

std::size_t function_arity(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.arity;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::var() {
  static const Expr x = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    return Expr(std::move(n));
  }();
  return x;
}

Expr Expr::param(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Param;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div && op != Op::Pow) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->args = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::call(Func f, std::vector<Expr> args) {
  if (args.size() != function_arity(f)) {
    throw std::invalid_argument("Expr::call: wrong number of arguments for " + std::string(function_name(f)));
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->func = f;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Number: return std::signbit(a.value) == std::signbit(b.value) && (a.value == b.value ||
                            (std::isnan(a.value) && std::isnan(b.value)));
    case Op::Var: return true;
    case Op::Param: return a.name == b.name;
    case Op::Call:
      if (a.func != b.func) return false;
      break;
    default: break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i] != b.args[i]) return false;
  }
  return true;
}

bool Expr::depends_on_x() const {
  if (node_->op == Op::Var) return true;
  for (const auto& a : node_->args) {
    if (a.depends_on_x()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Shortest decimal that reads back to the same double.
std::string format_number(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return kSum;
    case Op::Mul:
    case Op::Div: return kProduct;
    case Op::Neg: return kUnary;
    case Op::Pow: return kPower;
    case Op::Number: return e.node().value < 0 || std::signbit(e.node().value) ? kUnary : kAtom;
    default: return kAtom;
  }
}

void print(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Number: out += format_number(n.value); return;
    case Op::Var: out += 'x'; return;
    case Op::Param: out += n.name; return;
    case Op::Neg:
      out += '-';
      print_operand(n.args[0], kUnary, out);
      return;
    case Op::Pow:
      print_operand(n.args[0], kAtom, out);
      out += '^';
      print_operand(n.args[1], kUnary, out);
      return;
    case Op::Call:
      out += function_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(n.args[i], out);
      }
      out += ')';
      return;
    default: break;
  }
  const bool sum = n.op == Op::Add || n.op == Op::Sub;
  const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
  print_operand(n.args[0], sum ? kSum : kProduct, out);
  out += sym;
  print_operand(n.args[1], sum ? kProduct : kUnary, out);
}

void print_sexpr(const Expr& e, std::string& out) {
  const Node& n = e.node();
  auto list = [&](std::string_view head) {
    out += '(';
    out += head;
    for (const auto& a : n.args) {
      out += ' ';
      print_sexpr(a, out);
    }
    out += ')';
  };
  switch (n.op) {
    case Op::Number: out += format_number(n.value); return;
    case Op::Var: out += 'x'; return;
    case Op::Param: out += n.name; return;
    case Op::Add: list("add"); return;
    case Op::Sub: list("sub"); return;
    case Op::Mul: list("mul"); return;
    case Op::Div: list("div"); return;
    case Op::Pow: list("pow"); return;
    case Op::Neg: list("neg"); return;
    case Op::Call: list(function_name(n.func)); return;
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

std::string Expr::sexpr() const {
  std::string out;
  print_sexpr(*this, out);
  return out;
}

std::set<std::string> parameters(const Expr& e) {
  std::set<std::string> out;
  std::vector<const Node*> stack{&e.node()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::Param) out.insert(n->name);
    for (const auto& a : n->args) stack.push_back(&a.node());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      if (i < s.size() && (is_ident_start(s[i]) || s[i] == '.')) {
        throw ParseError(ParseErrorKind::Lexical, i,
                         std::string("unexpected character '") + s[i] + "' after number (no implicit multiplication)");
      }
      Token t{Tok::Number, start, std::string(s.substr(start, i - start))};
      t.number = std::strtod(t.text.c_str(), nullptr);
      if (!std::isfinite(t.number)) {
        throw ParseError(ParseErrorKind::Lexical, start, "number out of range");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident(s[i])) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default:
        throw ParseError(ParseErrorKind::Lexical, i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail("expected operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(ParseErrorKind::Syntax, t.pos, expected + ", found " + found);
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Op op = take().kind == Tok::Plus ? Op::Add : Op::Sub;
      lhs = Expr::binary(op, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Op op = take().kind == Tok::Star ? Op::Mul : Op::Div;
      lhs = Expr::binary(op, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return Expr::neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind == Tok::Caret) {
      take();
      return Expr::binary(Op::Pow, base, unary());
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: take(); return Expr::number(t.number);
      case Tok::LParen: {
        take();
        Expr e = expr();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return e;
      }
      case Tok::Ident: return identifier();
      default: fail("expected expression");
    }
  }

  Expr identifier() {
    const Token name = take();
    const FuncInfo* fn = find_func(name.text);
    if (peek().kind == Tok::LParen) {
      if (!fn) throw ParseError(ParseErrorKind::Syntax, name.pos, "unknown function '" + name.text + "'");
      take();
      std::vector<Expr> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(expr());
        while (peek().kind == Tok::Comma) {
          take();
          args.push_back(expr());
        }
      }
      if (peek().kind != Tok::RParen) fail("expected ',' or ')'");
      take();
      if (args.size() != fn->arity) {
        throw ParseError(ParseErrorKind::Arity, name.pos,
                         std::string(fn->name) + " takes " + std::to_string(fn->arity) + " argument" +
                             (fn->arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
      }
      return Expr::call(fn->func, std::move(args));
    }
    if (fn) fail("expected '(' after function name '" + name.text + "'");
    if (name.text == "x") return Expr::var();
    if (name.text == "pi") return Expr::number(std::numbers::pi);
    return Expr::param(name.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src) {
  Parser p(lex(src));
  return p.parse_all();
}

}  // namespace gptrans::expr

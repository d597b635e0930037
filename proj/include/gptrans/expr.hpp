// Integrand expression language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' | ident | ident '(' args ')' | '(' expr ')'
//
// Expressions are immutable trees shared by pointer; copying an Expr is cheap.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gptrans/decay_class.hpp"

namespace gptrans::expr {

using ParamMap = std::map<std::string, double>;

enum class ParseErrorKind { Lexical, Syntax, Arity };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail);
  ParseErrorKind kind() const { return kind_; }
  /// 0-based byte offset into the source.
  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
  std::string detail_;
};

class UnboundParameter : public std::runtime_error {
 public:
  explicit UnboundParameter(const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class Op { Number, Var, Param, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class Func { Exp, Sin, Cos, Sqrt, Abs, Ln, Erfc, Erfcx, Besselj, Gamma, E1 };

std::string_view function_name(Func f);
std::size_t function_arity(Func f);

struct Node;

class Expr {
 public:
  /// The literal 0.
  Expr();

  static Expr number(double v);
  static Expr var();
  static Expr param(std::string name);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr neg(Expr operand);
  static Expr call(Func f, std::vector<Expr> args);

  const Node& node() const { return *node_; }
  Op op() const;

  /// Structural equality (numbers compared bitwise).
  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

  /// Canonical infix form; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  /// Fully parenthesized prefix form, e.g. (mul (pow x 3) (exp (neg x))).
  std::string sexpr() const;

  bool depends_on_x() const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Number;
  double value = 0.0;
  std::string name;  // Param
  Func func = Func::Exp;
  std::vector<Expr> args;  // operands, in source order
};

Expr parse(std::string_view src);

/// Direct tree evaluation. Throws UnboundParameter or specfun::DomainError.
double eval(const Expr& e, double x, const ParamMap& params = {});

/// Names of all parameters referenced.
std::set<std::string> parameters(const Expr& e);

/// Substitutes bound parameters and folds subtrees that do not involve x.
Expr bind(const Expr& e, const ParamMap& params);

/// Replaces every occurrence of x by `arg`, e.g. f(x) -> f(x^(1/n)).
Expr substitute(const Expr& e, const Expr& arg);

/// Stack-machine form of a fully bound expression, for repeated evaluation
/// inside quadrature loops. Copyable and safe to call concurrently.
class Compiled {
 public:
  double operator()(double x) const;
  std::size_t size() const { return code_.size(); }

  enum class Code : unsigned char { Const, X, Add, Sub, Mul, Div, Pow, Neg, Call1, Call2 };
  struct Instr {
    Code code;
    Func func;
    double value;
  };

 private:
  friend Compiled compile(const Expr& e, const ParamMap& params);
  std::vector<Instr> code_;
  std::size_t depth_ = 0;
};

/// Binds and compiles. Throws UnboundParameter if any parameter is missing.
Compiled compile(const Expr& e, const ParamMap& params = {});

/// Structural decay heuristic over the product of factors of e (after binding).
DecayClass classify_decay(const Expr& e, const ParamMap& params = {});

}  // namespace gptrans::expr

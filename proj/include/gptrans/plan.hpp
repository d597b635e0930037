// Computation plans: small trees of transforms, integrals, products and sums
// over expression leaves. A plan is built once per verification point and
// evaluated to a number with an error estimate.
//
// Scoping: every node is a function of one variable x. A Transform node
// integrates its body over a fresh variable, evaluating its point expression
// at the enclosing x; an Integral node integrates its body over (0, inf).
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gptrans/expr.hpp"
#include "gptrans/quad.hpp"
#include "gptrans/transforms.hpp"

namespace gptrans::catalog {

enum class PlanOp { Fn, Transform, Integral, Product, Sum };

struct PlanNode;
using Plan = std::shared_ptr<const PlanNode>;

struct PlanNode {
  PlanOp op = PlanOp::Fn;
  expr::Expr expr;  // Fn: the function itself. Transform: the evaluation point.
  std::optional<transforms::TransformKind> kind;
  bool raw = false;  // Transform: integrate the defining integral as written
  // Integral: Auto picks from the classified factors of the body.
  quad::Strategy strategy = quad::Strategy::Auto;
  std::optional<double> split;
  std::vector<Plan> args;
};

Plan fn(const expr::Expr& e);
Plan fn(std::string_view src);
Plan constant(double c);
Plan transform(const transforms::TransformKind& kind, Plan body, const expr::Expr& point, bool raw = false);
Plan transform(const transforms::TransformKind& kind, Plan body, std::string_view point, bool raw = false);
Plan integral(Plan body, quad::Strategy strategy = quad::Strategy::Auto, std::optional<double> split = {});
Plan product(std::vector<Plan> factors);
Plan sum(std::vector<Plan> terms);
Plan scale(double c, Plan p);

/// The single expression a plan reduces to, if it contains no transform or
/// integral.
std::optional<expr::Expr> as_expr(const Plan& p);

/// One-line rendering, e.g. "L2n(n=1)[L2n(n=1)[exp(-x^2)](x)](z)".
std::string describe(const Plan& p);

struct PlanResult {
  double value = 0.0;
  double err_est = 0.0;
  std::size_t evals = 0;
  quad::Status status = quad::Status::Converged;
  std::string note;

  bool ok() const;
};

/// Evaluates a closed plan (no free x) under the given bindings. Nested
/// transforms run with transforms::inner_options of their parent.
PlanResult evaluate(const Plan& p, const expr::ParamMap& params, const quad::QuadOptions& opts);

}  // namespace gptrans::catalog

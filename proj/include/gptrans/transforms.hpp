// The eight transform kernels, evaluated at positive points.
//
//   Laplace     e^{-xy}                     Stieltjes   1/(x+y)
//   L2          x e^{-x^2 y^2}              P_n         x^{n-1}/(x^n+y^n)
//   L_n         x^{n-1} e^{-y^n x^n}        P_2n        x^{2n-1}/(x^{2n}+y^{2n})
//   L_2n        x^{2n-1} e^{-y^{2n}x^{2n}}  Widder      x/(x^2+y^2)
//
// Each kernel is x^{m-1} K(x^m, y^m) for m in {1, 2, n, 2n}, so t = x^m turns
// every transform into (1/m) times a Laplace or Stieltjes transform of
// f(t^{1/m}) at y^m. eval_transform integrates that reduced form;
// eval_transform_raw integrates the defining integral as written.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gptrans/expr.hpp"
#include "gptrans/quad.hpp"

namespace gptrans::transforms {

enum class Kind { Laplace, L2, Ln, L2n, Stieltjes, Pn, P2n, Widder };

class InvalidOrder : public std::invalid_argument {
 public:
  explicit InvalidOrder(const std::string& what) : std::invalid_argument(what) {}
};

class TransformKind {
 public:
  /// Throws InvalidOrder: L_n and P_n need n = 2^k; L_2n and P_2n need n >= 1.
  /// The order is ignored by the four classical kinds.
  TransformKind(Kind kind, int n = 1);

  Kind kind() const { return kind_; }
  int order() const { return n_; }
  /// m in x^{m-1} K(x^m, y^m).
  int substitution_power() const;
  bool laplace_type() const;
  std::string name() const;

  bool operator==(const TransformKind&) const = default;

 private:
  Kind kind_;
  int n_;
};

/// Accepts laplace, l2, ln, l2n, stieltjes, pn, p2n, widder (case-insensitive).
std::optional<Kind> parse_kind(std::string_view name);
std::string_view kind_name(Kind k);

/// Kernel value k(x, y) of the defining integral, without f.
double kernel(const TransformKind& kind, double x, double y);

struct TransformRequest {
  TransformKind kind{Kind::Laplace};
  expr::Expr f;
  expr::ParamMap params;
  double point = 1.0;
  quad::QuadOptions opts;
};

quad::QuadResult eval_transform(const TransformRequest& req);
quad::QuadResult eval_transform_raw(const TransformRequest& req);

/// Transform of an arbitrary (possibly error-carrying) function. The decay
/// class of f steers the strategy; pass DecayClass::unknown() if nothing is
/// known. Kernel weights that underflow to zero skip the call to f.
quad::QuadResult apply(const TransformKind& kind, const quad::NestedIntegrand& f, const expr::DecayClass& f_class,
                       double y, const quad::QuadOptions& opts, bool raw = false);

/// Options for the inner level of an iterated integral: a tenth of the
/// tolerance and a hundredth of the evaluation budget of the outer level.
quad::QuadOptions inner_options(const quad::QuadOptions& outer);

/// Raised when an inner transform of an iterated integral fails at an outer
/// node that matters.
class InnerFailure : public std::runtime_error {
 public:
  InnerFailure(double at, const std::string& detail);
  double at() const { return at_; }

 private:
  double at_;
};

/// L_2n{L_2n{f(x); y}; z}, integrated over y with the inner transform
/// evaluated at every node.
quad::QuadResult iterate_l2n(const expr::Expr& f, const expr::ParamMap& params, int n, double z,
                             const quad::QuadOptions& opts = {});

struct ParsevalMembers {
  quad::QuadResult product_of_transforms;  // int y^{2n-1} L_2n{f;y} L_2n{g;y} dy
  quad::QuadResult f_against_p2n_g;        // (1/2n) int x^{2n-1} f(x) P_2n{g;x} dx
  quad::QuadResult g_against_p2n_f;        // (1/2n) int u^{2n-1} g(u) P_2n{f;u} du
};

ParsevalMembers parseval_members(const expr::Expr& f, const expr::Expr& g, const expr::ParamMap& params, int n,
                                 const quad::QuadOptions& opts = {});

}  // namespace gptrans::transforms

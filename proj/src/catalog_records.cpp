#include <cmath>
#include <numbers>

#include "gptrans/catalog.hpp"

namespace gptrans::catalog {

namespace {

using quad::Strategy;
using transforms::Kind;
using transforms::TransformKind;

const double kSqrtPi = std::sqrt(std::numbers::pi);

using Functions = std::map<std::string, std::string>;
using Axis = std::pair<std::string, std::vector<double>>;

const std::vector<std::string> kCorpus = {"exp(-x)", "exp(-x^2)", "exp(-x^4)", "1/(1+x^2)^2"};

std::vector<Functions> each_f(const std::vector<std::string>& fs) {
  std::vector<Functions> out;
  for (const auto& f : fs) out.push_back({{"f", f}});
  return out;
}

std::vector<Functions> pairs(const std::vector<std::pair<std::string, std::string>>& fg) {
  std::vector<Functions> out;
  for (const auto& [f, g] : fg) out.push_back({{"f", f}, {"g", g}});
  return out;
}

// Cartesian product: functions outermost, then the axes in the order given.
std::vector<Point> grid(const std::vector<Functions>& funcs, const std::vector<Axis>& axes) {
  std::vector<Point> out;
  for (const auto& fs : funcs) {
    std::vector<expr::ParamMap> partial{{}};
    for (const auto& [name, values] : axes) {
      std::vector<expr::ParamMap> next;
      for (const auto& pm : partial) {
        for (double v : values) {
          auto q = pm;
          q[name] = v;
          next.push_back(std::move(q));
        }
      }
      partial = std::move(next);
    }
    for (auto& pm : partial) out.push_back({std::move(pm), fs});
  }
  return out;
}

std::vector<Point> points(std::vector<expr::ParamMap> list) {
  std::vector<Point> out;
  for (auto& pm : list) out.push_back({std::move(pm), {}});
  return out;
}

FreeVar positive(const std::string& name) { return {name, name + " > 0", [](double v) { return v > 0.0; }}; }

FreeVar at_least_one(const std::string& name) {
  return {name, name + " >= 1", [](double v) { return v >= 1.0; }};
}

FreeVar power_of_two(const std::string& name) {
  return {name, name + " = 2^k, k >= 0", [](double v) {
            if (!(v >= 1.0) || v != std::trunc(v) || v > 1 << 20) return false;
            const int k = static_cast<int>(v);
            return (k & (k - 1)) == 0;
          }};
}

FreeVar positive_int(const std::string& name) {
  return {name, name + " in {1, 2, 3, ...}", [](double v) { return v >= 1.0 && v == std::trunc(v); }};
}

FreeVar above_minus_half(const std::string& name) {
  return {name, name + " > -1/2", [](double v) { return v > -0.5; }};
}

int order(const Point& p, const char* name = "n") { return static_cast<int>(p.params.at(name)); }

// The point's function `name` composed with arg, e.g. f(x^(1/n)).
Plan f_of(const Point& p, const std::string& name, std::string_view arg = "x") {
  return fn(expr::substitute(expr::parse(p.functions.at(name)), expr::parse(arg)));
}

Plan weighted(std::string_view weight, Plan f) { return product({fn(weight), std::move(f)}); }

TransformKind tk(Kind k, int n = 1) { return TransformKind(k, n); }

// ---------------------------------------------------------------------------
// Reductions of the generalized kernels to the classical ones. The left side
// integrates the defining integral as written; the right side evaluates the
// classical transform of the substituted function.

IdentityRecord reduction(std::string id, std::string title, std::string statement, Expected expected,
                         std::vector<Point> pts, std::vector<FreeVar> vars, std::function<Sides(const Point&)> build) {
  IdentityRecord r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.statement = std::move(statement);
  r.free_vars = std::move(vars);
  r.function_vars = {"f"};
  r.default_points = std::move(pts);
  r.interpretation = Interpretation::Direct;
  r.expected = expected;
  r.build = std::move(build);
  return r;
}

void add_reductions(std::vector<IdentityRecord>& out) {
  const Axis ys{"y", {0.5, 1.0, 2.0}};
  const Axis pow2{"n", {1, 2, 4}};
  const Axis ints{"n", {1, 2, 3}};
  const auto corpus = each_f(kCorpus);

  out.push_back(reduction("R1", "L2 as a Laplace transform at y^2", "L2{f(x); y} = (1/2) L{f(sqrt x); y^2}",
                          Expected::MustPass, grid(corpus, {ys}), {positive("y")}, [](const Point& p) {
                            Sides s;
                            s.lhs = transform(tk(Kind::L2), f_of(p, "f"), "y", true);
                            s.rhs = scale(0.5, transform(tk(Kind::Laplace), f_of(p, "f", "sqrt(x)"), "y^2"));
                            return s;
                          }));

  out.push_back(reduction("R2", "Laplace as an L2 transform at sqrt(y)", "L{f(x); y} = 2 L2{f(x^2); sqrt y}",
                          Expected::MustPass, grid(corpus, {ys}), {positive("y")}, [](const Point& p) {
                            Sides s;
                            s.lhs = transform(tk(Kind::Laplace), f_of(p, "f"), "y", true);
                            s.rhs = scale(2.0, transform(tk(Kind::L2), f_of(p, "f", "x^2"), "sqrt(y)"));
                            return s;
                          }));

  out.push_back(reduction(
      "R3", "L4 through Laplace and through L2",
      "L4{f(x); y} = (1/4) L{f(x^(1/4)); y^4} = (1/2) L2{f(x^(1/2)); y^2}", Expected::MustPass, grid(corpus, {ys}),
      {positive("y")}, [](const Point& p) {
        Sides s;
        s.lhs = transform(tk(Kind::Ln, 4), f_of(p, "f"), "y", true);
        s.rhs = scale(0.25, transform(tk(Kind::Laplace), f_of(p, "f", "x^(1/4)"), "y^4"));
        s.rhs_label = "(1/4) L{f(x^(1/4)); y^4}";
        s.also.push_back({"(1/2) L2{f(x^(1/2)); y^2}",
                          scale(0.5, transform(tk(Kind::L2), f_of(p, "f", "x^(1/2)"), "y^2"))});
        return s;
      }));

  out.push_back(reduction("R4", "L_n as a Laplace transform at y^n", "L_n{f(x); y} = (1/n) L{f(x^(1/n)); y^n}",
                          Expected::MustPass, grid(corpus, {pow2, ys}), {power_of_two("n"), positive("y")},
                          [](const Point& p) {
                            const int n = order(p);
                            Sides s;
                            s.lhs = transform(tk(Kind::Ln, n), f_of(p, "f"), "y", true);
                            s.rhs = scale(1.0 / n, transform(tk(Kind::Laplace), f_of(p, "f", "x^(1/n)"), "y^n"));
                            return s;
                          }));

  out.push_back(reduction(
      "R5", "L_2n as a Laplace transform at y^(2n)", "L_2n{f(x); y} = (1/(2n)) L{f(x^(1/(2n))); y^(2n)}",
      Expected::MustPass, grid(corpus, {ints, ys}), {positive_int("n"), positive("y")}, [](const Point& p) {
        const int n = order(p);
        Sides s;
        s.lhs = transform(tk(Kind::L2n, n), f_of(p, "f"), "y", true);
        s.rhs = scale(1.0 / (2 * n), transform(tk(Kind::Laplace), f_of(p, "f", "x^(1/(2*n))"), "y^(2*n)"));
        return s;
      }));

  out.push_back(reduction("R6", "L_n as an L2 transform at y^(n/2)", "L_n{f(x); y} = (2/n) L2{f(x^(2/n)); y^(n/2)}",
                          Expected::Audit, grid(corpus, {pow2, ys}), {power_of_two("n"), positive("y")},
                          [](const Point& p) {
                            const int n = order(p);
                            Sides s;
                            s.lhs = transform(tk(Kind::Ln, n), f_of(p, "f"), "y", true);
                            s.rhs = scale(2.0 / n, transform(tk(Kind::L2), f_of(p, "f", "x^(2/n)"), "y^(n/2)"));
                            return s;
                          }));
  out.back().remark = "For n = 1 this is the Laplace-to-L2 relation with f(x^2) at sqrt(y).";

  out.push_back(reduction("R7", "L_2n as an L2 transform at y^n", "L_2n{f(x); y} = (1/n) L2{f(x^(1/n)); y^n}",
                          Expected::MustPass, grid(corpus, {ints, ys}), {positive_int("n"), positive("y")},
                          [](const Point& p) {
                            const int n = order(p);
                            Sides s;
                            s.lhs = transform(tk(Kind::L2n, n), f_of(p, "f"), "y", true);
                            s.rhs = scale(1.0 / n, transform(tk(Kind::L2), f_of(p, "f", "x^(1/n)"), "y^n"));
                            return s;
                          }));

  out.push_back(reduction("R8", "P_n as a Stieltjes transform at y^n", "P_n{f(x); y} = (1/n) S{f(x^(1/n)); y^n}",
                          Expected::MustPass, grid(corpus, {pow2, ys}), {power_of_two("n"), positive("y")},
                          [](const Point& p) {
                            const int n = order(p);
                            Sides s;
                            s.lhs = transform(tk(Kind::Pn, n), f_of(p, "f"), "y", true);
                            s.rhs = scale(1.0 / n, transform(tk(Kind::Stieltjes), f_of(p, "f", "x^(1/n)"), "y^n"));
                            return s;
                          }));

  out.push_back(reduction(
      "R9", "P_n as a Widder potential transform at y^(n/2)", "P_n{f(x); y} = (2/n) P{f(x^(2/n)); y^(n/2)}",
      Expected::Audit, grid(corpus, {pow2, ys}), {power_of_two("n"), positive("y")}, [](const Point& p) {
        const int n = order(p);
        Sides s;
        s.lhs = transform(tk(Kind::Pn, n), f_of(p, "f"), "y", true);
        s.rhs = scale(2.0 / n, transform(tk(Kind::Widder), f_of(p, "f", "x^(2/n)"), "y^(n/2)"));
        return s;
      }));

  out.push_back(reduction("R10", "P_2n as a Widder potential transform at y^n",
                          "P_2n{f(x); y} = (1/n) P{f(x^(1/n)); y^n}", Expected::MustPass, grid(corpus, {ints, ys}),
                          {positive_int("n"), positive("y")}, [](const Point& p) {
                            const int n = order(p);
                            Sides s;
                            s.lhs = transform(tk(Kind::P2n, n), f_of(p, "f"), "y", true);
                            s.rhs = scale(1.0 / n, transform(tk(Kind::Widder), f_of(p, "f", "x^(1/n)"), "y^n"));
                            return s;
                          }));
}

// ---------------------------------------------------------------------------
// Classical exchange identities.

IdentityRecord exchange(std::string id, std::string title, std::string statement, std::vector<Point> pts,
                        std::function<Sides(const Point&)> build) {
  IdentityRecord r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.statement = std::move(statement);
  r.function_vars = {"f", "g"};
  r.default_points = std::move(pts);
  r.interpretation = Interpretation::Iterated;
  r.expected = Expected::MustPass;
  r.build = std::move(build);
  return r;
}

void add_exchanges(std::vector<IdentityRecord>& out) {
  const auto fg = pairs({{"exp(-x)", "exp(-x^2)"}, {"exp(-x^2)", "1/(1+x^2)^2"}, {"exp(-x^4)", "exp(-x)"}});

  out.push_back(exchange("G1", "Laplace exchange identity", "int f(x) L{g; x} dx = int g(y) L{f; y} dy",
                         grid(fg, {}), [](const Point& p) {
                           Sides s;
                           s.lhs = integral(product({f_of(p, "f"), transform(tk(Kind::Laplace), f_of(p, "g"), "x")}));
                           s.rhs = integral(product({f_of(p, "g"), transform(tk(Kind::Laplace), f_of(p, "f"), "x")}));
                           return s;
                         }));

  {
    auto pts = grid(pairs({{"exp(-x)", "exp(-x)"}, {"exp(-x^2)", "exp(-x)"}, {"exp(-x)", "1/(1+x^2)^2"}}), {});
    out.push_back(exchange("Y1", "Product of Laplace transforms against a Stieltjes transform",
                           "int L{f; t} L{g; t} dt = int g(t) S{f; t} dt", std::move(pts), [](const Point& p) {
                             Sides s;
                             s.lhs = integral(product({transform(tk(Kind::Laplace), f_of(p, "f"), "x"),
                                                       transform(tk(Kind::Laplace), f_of(p, "g"), "x")}));
                             s.rhs = integral(
                                 product({f_of(p, "g"), transform(tk(Kind::Stieltjes), f_of(p, "f"), "x")}));
                             return s;
                           }));
    out.back().remark = "Both transforms on the left are taken at the integration variable.";
  }

  const auto sym = pairs({{"exp(-x^2)", "exp(-x^2)"}, {"exp(-x)", "exp(-x^2)"}, {"1/(1+x^2)^2", "exp(-x)"}});

  out.push_back(exchange("SS1", "Widder potential exchange identity",
                         "int y P{f; y} g(y) dy = int x P{g; x} f(x) dx", grid(sym, {}), [](const Point& p) {
                           Sides s;
                           s.lhs = integral(product({weighted("x", f_of(p, "g")),
                                                     transform(tk(Kind::Widder), f_of(p, "f"), "x")}));
                           s.rhs = integral(product({weighted("x", f_of(p, "f")),
                                                     transform(tk(Kind::Widder), f_of(p, "g"), "x")}));
                           return s;
                         }));

  out.push_back(exchange("W1", "P4 exchange identity", "int x^3 f(x) P4{g; x} dx = int u^3 g(u) P4{f; u} du",
                         grid(sym, {}), [](const Point& p) {
                           Sides s;
                           s.lhs = integral(product({weighted("x^3", f_of(p, "f")),
                                                     transform(tk(Kind::Pn, 4), f_of(p, "g"), "x")}));
                           s.rhs = integral(product({weighted("x^3", f_of(p, "g")),
                                                     transform(tk(Kind::Pn, 4), f_of(p, "f"), "x")}));
                           return s;
                         }));
}

// ---------------------------------------------------------------------------
// Iterates of L_n and L_2n.

void add_iterates(std::vector<IdentityRecord>& out) {
  {
    IdentityRecord r;
    r.id = "L1";
    r.title = "L_n of L_2n as an erfcx-weighted integral";
    r.statement =
        "L_n{L_2n{f(x); u}; y} = (sqrt(pi)/(2n)) int x^(n-1) f(x) exp(y^(2n)/(4x^(2n))) erfc(y^n/(2x^n)) dx";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.function_vars = {"f"};
    r.default_points = grid(each_f({"exp(-x^2)", "exp(-x)"}), {{"n", {1, 2}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::MustPass;
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::Ln, n), transform(tk(Kind::L2n, n), f_of(p, "f"), "x"), "y");
      s.rhs = scale(kSqrtPi / (2 * n),
                    integral(product({fn("x^(n-1)"), f_of(p, "f"), fn("erfcx(y^n/(2*x^n))")})));
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "L2";
    r.title = "L_2n of L_n split into a moment and an erfcx-weighted integral";
    r.statement =
        "L_2n{L_n{f(x); u}; y} = (1/(2n y^(2n))) int x^(n-1) f(x) dx"
        " - (sqrt(pi)/(4n y^(3n))) int x^(-2n-1) f(1/x) exp(1/(4x^(2n)y^(2n))) erfc(1/(2x^n y^n)) dx";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.function_vars = {"f"};
    r.default_points = grid(each_f({"exp(-x^2)", "exp(-x)"}), {{"n", {1, 2}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.remark = "The completed square is read with x^n in place of x: u^n + x^n/(2y^(2n)).";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::L2n, n), transform(tk(Kind::Ln, n), f_of(p, "f"), "x"), "y");
      s.rhs = sum({product({fn("1/(2*n*y^(2*n))"), integral(weighted("x^(n-1)", f_of(p, "f")))}),
                   product({fn("-sqrt(pi)/(4*n*y^(3*n))"),
                            integral(product({fn("x^(-2*n-1)"), f_of(p, "f", "1/x"), fn("erfcx(1/(2*x^n*y^n))")}),
                                     Strategy::Algebraic, 1.0)})});
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "C1";
    r.title = "L_2n of L_n through an inverted L_n of L_2n";
    r.statement =
        "L_2n{L_n{f(x); u}; y} = (1/(2n y^(2n))) int x^(n-1) f(x) dx"
        " - (1/(2y^(3n))) L_n{L_2n{x^(-3n) f(1/x); u}; 1/y}";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.function_vars = {"f"};
    r.default_points = grid(each_f({"exp(-x^2)", "exp(-x)"}), {{"n", {1, 2}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::L2n, n), transform(tk(Kind::Ln, n), f_of(p, "f"), "x"), "y");
      const Plan inverted = weighted("x^(-3*n)", f_of(p, "f", "1/x"));
      s.rhs = sum({product({fn("1/(2*n*y^(2*n))"), integral(weighted("x^(n-1)", f_of(p, "f")))}),
                   product({fn("-1/(2*y^(3*n))"),
                            transform(tk(Kind::Ln, n), transform(tk(Kind::L2n, n), inverted, "x"), "1/y")})});
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "C2";
    r.title = "Rescaling between L_n and L_m";
    r.statement = "L_n{f(x); y} = (m/n) L_m{f(x^(m/n)); y^(n/m)}";
    r.free_vars = {power_of_two("n"), power_of_two("m"), positive("y")};
    r.function_vars = {"f"};
    for (const auto& [n, m] : {std::pair{2.0, 1.0}, {4.0, 2.0}, {4.0, 1.0}}) {
      for (auto& pt : grid(each_f(kCorpus), {{"n", {n}}, {"m", {m}}, {"y", {0.5, 1.0, 2.0}}})) {
        r.default_points.push_back(std::move(pt));
      }
    }
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::MustPass;
    r.build = [](const Point& p) {
      const int n = order(p);
      const int m = order(p, "m");
      Sides s;
      s.lhs = transform(tk(Kind::Ln, n), f_of(p, "f"), "y", true);
      s.rhs = scale(static_cast<double>(m) / n, transform(tk(Kind::Ln, m), f_of(p, "f", "x^(m/n)"), "y^(n/m)"));
      return s;
    };
    out.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------------
// Closed forms obtained from the iterates.

void add_evaluations(std::vector<IdentityRecord>& out) {
  {
    IdentityRecord r;
    r.id = "E1";
    r.title = "erfc integral with an inverted Gaussian weight";
    r.statement = "int x^(-2n-1) exp(-x^(-2n) (1 - y^(-2n)/4)) erfc(1/(2x^n y^n)) dx = (1/n) y^n/(2y^n + 1)";
    r.free_vars = {power_of_two("n"), at_least_one("y")};
    r.default_points = grid({{}}, {{"n", {1, 2}}, {"y", {1.0, 2.0}}});
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::Audit;
    r.remark = "Points restricted to y >= 1, where the integrand is plainly integrable.";
    r.build = [](const Point&) {
      Sides s;
      s.lhs = integral(fn("x^(-2*n-1)*exp(-(x^(-2*n))*(1-0.25*y^(-2*n)))*erfc(1/(2*x^n*y^n))"), Strategy::Algebraic,
                       1.0);
      s.rhs = fn("(1/n)*y^n/(2*y^n+1)");
      return s;
    };
    out.push_back(std::move(r));
  }

  auto iterated_sin = [](const Point& p) {
    const int n = order(p);
    Sides s;
    s.lhs = scale(2.0 * n / kSqrtPi,
                  transform(tk(Kind::Ln, n), transform(tk(Kind::L2n, n), fn("sin(x^n)"), "x"), "y"));
    s.rhs = fn("(sqrt(pi)/n)*y^n*erfcx(y^n)");
    s.cross_checks.push_back(
        {"Abel value of the x-integral", integral(fn("x^(n-1)*sin(x^n)*erfcx(y^n/(2*x^n))"), Strategy::Abel)});
    s.cross_checks.push_back({"oscillatory reading of the x-integral",
                              integral(fn("x^(n-1)*sin(x^n)*erfcx(y^n/(2*x^n))"), Strategy::Oscillatory)});
    return s;
  };
  {
    IdentityRecord r;
    r.id = "E2";
    r.title = "sin x against the erfc kernel";
    r.statement = "int sin(x) exp(y^2/(4x^2)) erfc(y/(2x)) dx = sqrt(pi) y exp(y^2) erfc(y)";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.default_points = grid({{}}, {{"n", {1}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.remark = "The left side is taken as (2/sqrt(pi)) L{L2{sin x; u}; y}; the x-integral is not absolutely convergent.";
    r.build = iterated_sin;
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "E3";
    r.title = "sin(x^n) against the erfc kernel";
    r.statement =
        "int x^(n-1) sin(x^n) exp(y^(2n)/(4x^(2n))) erfc(y^n/(2x^n)) dx = (sqrt(pi)/n) y^n exp(y^(2n)) erfc(y^n)";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.default_points = grid({{}}, {{"n", {1, 2}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.remark = "The left side is taken as (2n/sqrt(pi)) L_n{L_2n{sin(x^n); u}; y}.";
    r.build = iterated_sin;
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "E4";
    r.title = "cos(x^n)/x against the erfc kernel";
    r.statement =
        "int (1/x) cos(x^n) exp(y^(2n)/(4x^(2n))) erfc(y^n/(2x^n)) dx"
        " = (4 sqrt(pi)/n) y^n (2y^(2n) + 3) exp(y^(2n)) erfc(y^n) + (8/n) y^(2n)";
    r.free_vars = {power_of_two("n"), positive("y")};
    r.default_points = grid({{}}, {{"n", {1, 2}}, {"y", {0.5, 1.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.remark = "The left side is taken as (2n/sqrt(pi)) L_n{L_2n{cos(x^n)/x^n; u}; y}.";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = scale(2.0 * n / kSqrtPi,
                    transform(tk(Kind::Ln, n), transform(tk(Kind::L2n, n), fn("cos(x^n)/x^n"), "x"), "y"));
      s.rhs = fn("(4*sqrt(pi)/n)*y^n*(2*y^(2*n)+3)*erfcx(y^n) + (8/n)*y^(2*n)");
      s.cross_checks.push_back(
          {"Abel value of the x-integral", integral(fn("cos(x^n)/x*erfcx(y^n/(2*x^n))"), Strategy::Abel)});
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "L3";
    r.title = "The second iterate of L_2n is a P_2n transform";
    r.statement = "L_2n{L_2n{f(x); y}; z} = (1/(2n)) P_2n{f(x); z}";
    r.free_vars = {positive_int("n"), positive("z")};
    r.function_vars = {"f"};
    r.default_points =
        grid(each_f({"exp(-x^2)", "exp(-x^4)", "1/(1+x^2)^2"}), {{"n", {1, 2, 3}}, {"z", {0.5, 1.0, 2.0}}});
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::MustPass;
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::L2n, n), transform(tk(Kind::L2n, n), f_of(p, "f"), "x"), "z");
      s.rhs = scale(1.0 / (2 * n), transform(tk(Kind::P2n, n), f_of(p, "f"), "z"));
      return s;
    };
    out.push_back(std::move(r));
  }

  const auto p2n_points = points({{{"n", 1}, {"z", 1}, {"y", 1}},
                                  {{"n", 1}, {"z", 0.5}, {"y", 2}},
                                  {{"n", 2}, {"z", 1}, {"y", 1}},
                                  {{"n", 2}, {"z", 1}, {"y", 0.5}}});
  {
    IdentityRecord r;
    r.id = "E5";
    r.title = "P_2n of sin(z^n u^n)";
    r.statement = "P_2n{sin(z^n u^n); y} = (pi/n) exp(-z^n y^n)";
    r.free_vars = {positive_int("n"), positive("z"), positive("y")};
    r.default_points = p2n_points;
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::Audit;
    r.remark = "The evaluation point is named y. Candidate constants: pi/n as stated, pi/(2n) from the derivation.";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::P2n, n), fn("sin(z^n*x^n)"), "y");
      s.rhs = fn("(pi/n)*exp(-z^n*y^n)");
      s.rhs_label = "constant pi/n";
      s.alternates.push_back({"constant pi/(2n)", fn("(pi/(2*n))*exp(-z^n*y^n)")});
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "E6";
    r.title = "P_2n of cos(z^n u^n)/u^n";
    r.statement = "P_2n{cos(z^n u^n)/u^n; y} = (pi/(2n y^n)) exp(-z^n y^n)";
    r.free_vars = {positive_int("n"), positive("z"), positive("y")};
    r.default_points = p2n_points;
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::Audit;
    r.remark = "The evaluation point is named y.";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::P2n, n), fn("cos(z^n*x^n)/x^n"), "y");
      s.rhs = fn("pi/(2*n*y^n)*exp(-z^n*y^n)");
      return s;
    };
    out.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------------
// Exchange identities for L_2n and P_2n, and identities derived from them.

void add_parseval(std::vector<IdentityRecord>& out) {
  const auto fg = pairs({{"exp(-x^2)", "exp(-x^2)"}, {"exp(-x^2)", "exp(-4*x^2)"}, {"exp(-x^4)", "exp(-x^4)"}});
  const auto pts = grid(fg, {{"n", {1, 2}}});

  auto member1 = [](const Point& p) {
    const int n = order(p);
    return integral(product({fn("x^(2*n-1)"), transform(tk(Kind::L2n, n), f_of(p, "f"), "x"),
                             transform(tk(Kind::L2n, n), f_of(p, "g"), "x")}),
                    Strategy::Algebraic, 1.0);
  };
  auto against = [](const Point& p, const char* outer, const char* inner) {
    const int n = order(p);
    return scale(1.0 / (2 * n), integral(product({weighted("x^(2*n-1)", f_of(p, outer)),
                                                  transform(tk(Kind::P2n, n), f_of(p, inner), "x")})));
  };

  auto record = [&](std::string id, std::string statement, std::function<Sides(const Point&)> build) {
    IdentityRecord r;
    r.id = std::move(id);
    r.title = "L_2n/P_2n exchange identity";
    r.statement = std::move(statement);
    r.free_vars = {positive_int("n")};
    r.function_vars = {"f", "g"};
    r.default_points = pts;
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::MustPass;
    r.build = std::move(build);
    out.push_back(std::move(r));
  };

  record("T1a", "int y^(2n-1) L_2n{f; y} L_2n{g; y} dy = (1/(2n)) int x^(2n-1) f(x) P_2n{g; x} dx",
         [=](const Point& p) {
           Sides s;
           s.lhs = member1(p);
           s.rhs = against(p, "f", "g");
           return s;
         });
  record("T1b", "int y^(2n-1) L_2n{f; y} L_2n{g; y} dy = (1/(2n)) int u^(2n-1) g(u) P_2n{f; u} du",
         [=](const Point& p) {
           Sides s;
           s.lhs = member1(p);
           s.rhs = against(p, "g", "f");
           return s;
         });
  record("T1c", "int x^(2n-1) f(x) P_2n{g; x} dx = int u^(2n-1) g(u) P_2n{f; u} du", [=](const Point& p) {
    Sides s;
    s.lhs = against(p, "f", "g");
    s.rhs = against(p, "g", "f");
    return s;
  });

  const auto cpts = grid(each_f({"exp(-x^2)", "exp(-x)"}), {{"n", {1, 2}}, {"z", {0.5, 1.0}}});
  auto derived = [&](std::string id, std::string title, std::string statement,
                       std::function<Sides(const Point&)> build) {
    IdentityRecord r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.statement = std::move(statement);
    r.free_vars = {power_of_two("n"), positive("z")};
    r.function_vars = {"f"};
    r.default_points = cpts;
    r.interpretation = Interpretation::Iterated;
    r.expected = Expected::Audit;
    r.build = std::move(build);
    out.push_back(std::move(r));
  };

  derived("C3", "L_2n of a rescaled L_2n as an L_n moment",
            "L_2n{y^(-n) L_2n{f(x); 1/(2^(1/n) y)}; z} = (sqrt(pi)/(2n z^n)) L_n{x^n f(x); z}", [](const Point& p) {
              const int n = order(p);
              Sides s;
              s.lhs = transform(
                  tk(Kind::L2n, n),
                  product({fn("x^(-n)"), transform(tk(Kind::L2n, n), f_of(p, "f"), "1/(2^(1/n)*x)")}), "z");
              s.rhs = product(
                  {fn("sqrt(pi)/(2*n*z^n)"), transform(tk(Kind::Ln, n), weighted("x^n", f_of(p, "f")), "z")});
              return s;
            });
  derived("C4", "sin(z^n x^n) against a P_2n transform",
            "int x^(2n-1) sin(z^n x^n) P_2n{g(u); x} dx = (pi/(2n)) L_n{x^n f(x); z}", [](const Point& p) {
              const int n = order(p);
              Sides s;
              s.lhs = integral(product({fn("x^(2*n-1)*sin(z^n*x^n)"), transform(tk(Kind::P2n, n), f_of(p, "f"), "x")}));
              s.rhs =
                  product({fn("pi/(2*n)"), transform(tk(Kind::Ln, n), weighted("x^n", f_of(p, "f")), "z")});
              return s;
            });
  out.back().remark = "The two sides name different functions; the record binds g = f.";
  derived("C5", "L_2n of a rescaled L_2n as an L_n transform",
            "L_2n{y^(-3n) L_2n{f(x); 1/(2^(1/n) y)}; z} = (sqrt(pi)/n) L_n{f(x); z}", [](const Point& p) {
              const int n = order(p);
              Sides s;
              s.lhs = transform(
                  tk(Kind::L2n, n),
                  product({fn("x^(-3*n)"), transform(tk(Kind::L2n, n), f_of(p, "f"), "1/(2^(1/n)*x)")}), "z");
              s.rhs = product({fn("sqrt(pi)/n"), transform(tk(Kind::Ln, n), f_of(p, "f"), "z")});
              return s;
            });
}

// ---------------------------------------------------------------------------
// Closed forms for erfc and Bessel integrands.

void add_closed_forms(std::vector<IdentityRecord>& out) {
  {
    IdentityRecord r;
    r.id = "X1";
    r.title = "L_n of x^n erfc(a^n x^n)";
    r.statement =
        "L_n{x^n erfc(a^n x^n); z} = (1/(n z^n)) (sqrt(pi)/z^n - 1/(2a^n))"
        " - (sqrt(pi)/(2n)) exp(z^n/(4a^(2n))) (1/z^(2n) - 1/(2a^(2n))) erfc(z^n/(2a^n))";
    r.free_vars = {power_of_two("n"), positive("a"), positive("z")};
    r.default_points = points({{{"n", 1}, {"a", 1}, {"z", 1}},
                               {{"n", 1}, {"a", 0.5}, {"z", 1}},
                               {{"n", 2}, {"a", 1}, {"z", 1}}});
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::Audit;
    r.remark = "Two exponent readings: exp(z^n/(4a^(2n))) as stated, exp(z^(2n)/(4a^(2n))) as derived.";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::Ln, n), fn("x^n*erfc(a^n*x^n)"), "z");
      s.rhs = fn(
          "(1/(n*z^n))*(sqrt(pi)/z^n - 1/(2*a^n))"
          " - (sqrt(pi)/(2*n))*exp(z^n/(4*a^(2*n)))*(1/z^(2*n) - 1/(2*a^(2*n)))*erfc(z^n/(2*a^n))");
      s.rhs_label = "exponent z^n/(4a^(2n))";
      s.alternates.push_back(
          {"exponent z^(2n)/(4a^(2n))",
           fn("(1/(n*z^n))*(sqrt(pi)/z^n - 1/(2*a^n))"
              " - (sqrt(pi)/(2*n))*exp(z^(2*n)/(4*a^(2*n)))*(1/z^(2*n) - 1/(2*a^(2*n)))*erfc(z^n/(2*a^n))")});
      // Differentiating the Laplace transform of erfc(b t) once in s = z^n.
      s.cross_checks.push_back({"reference (1/n)[(1-E)/s^2 + E/(2b^2) - 1/(b sqrt(pi) s)], E = erfcx(s/(2b))",
                                fn("(1/n)*((1-erfcx(z^n/(2*a^n)))/z^(2*n) + erfcx(z^n/(2*a^n))/(2*a^(2*n))"
                                   " - 1/(a^n*sqrt(pi)*z^n))")});
      return s;
    };
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.id = "X2";
    r.title = "L_n of x^(nv) J_v(2a^n x^n)";
    r.statement =
        "L_n{x^(nv) J_v(2a^n x^n); z} = (a^(nv) 2^(2v)/(n sqrt(pi))) (z^(2n) + 4a^(2n))^(-v-1/2) Gamma(v+1/2)";
    r.free_vars = {power_of_two("n"), above_minus_half("v"), positive("a"), positive("z")};
    r.default_points = points({{{"n", 1}, {"v", 0}, {"a", 1}, {"z", 1}},
                               {{"n", 1}, {"v", 0}, {"a", 0.5}, {"z", 2}},
                               {{"n", 2}, {"v", 0.5}, {"a", 1}, {"z", 1}},
                               {{"n", 1}, {"v", 1}, {"a", 1}, {"z", 2}},
                               {{"n", 2}, {"v", 1.5}, {"a", 0.5}, {"z", 1}}});
    r.interpretation = Interpretation::Direct;
    r.expected = Expected::Audit;
    r.remark = "At n = 1, v = 0 the right side must also equal (z^2 + 4a^2)^(-1/2), the Laplace transform of J_0(2ax).";
    r.build = [](const Point& p) {
      const int n = order(p);
      Sides s;
      s.lhs = transform(tk(Kind::Ln, n), fn("x^(n*v)*besselj(v, 2*a^n*x^n)"), "z");
      s.rhs = fn("a^(n*v)*2^(2*v)/(n*sqrt(pi))*(z^(2*n)+4*a^(2*n))^(-v-0.5)*gamma(v+0.5)");
      if (n == 1 && p.params.at("v") == 0.0) {
        s.also.push_back({"classical L{J_0(2ax); z} = (z^2 + 4a^2)^(-1/2)", fn("(z^2+4*a^2)^(-0.5)")});
      }
      return s;
    };
    out.push_back(std::move(r));
  }
}

std::vector<IdentityRecord> build_catalog() {
  std::vector<IdentityRecord> out;
  add_reductions(out);
  add_exchanges(out);
  add_iterates(out);
  add_evaluations(out);
  add_parseval(out);
  add_closed_forms(out);
  return out;
}

}  // namespace

const std::vector<IdentityRecord>& builtin_catalog() {
  static const std::vector<IdentityRecord> catalog = build_catalog();
  return catalog;
}

const IdentityRecord* find_record(std::string_view id) {
  for (const auto& r : builtin_catalog()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

}  // namespace gptrans::catalog

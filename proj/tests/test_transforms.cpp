#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gptrans/transforms.hpp"
#include "oracles.hpp"

using namespace gptrans;
using namespace gptrans::transforms;
using expr::parse;

namespace {

const double kL3Point = 0.14908684058079849;   // (1/2)(1/2) e E1(1)
const double kWidderSin = 0.57786367489546087; // (pi/2) e^{-1}
const double kIterSin = 0.28893183744773043;   // (1/2)(pi/2) e^{-1}

const std::vector<std::string> kDecaying = {"exp(-x)", "exp(-x^2)", "exp(-x^4)", "1/(1+x^2)^2"};

quad::QuadResult eval(Kind k, int n, const std::string& f, double y, const expr::ParamMap& p = {}, bool raw = false) {
  TransformRequest req;
  req.kind = TransformKind(k, n);
  req.f = parse(f);
  req.params = p;
  req.point = y;
  return raw ? eval_transform_raw(req) : eval_transform(req);
}

std::vector<TransformKind> all_kinds() {
  std::vector<TransformKind> out{TransformKind(Kind::Laplace), TransformKind(Kind::L2), TransformKind(Kind::Stieltjes),
                                 TransformKind(Kind::Widder)};
  for (int n : {1, 2, 4}) {
    out.emplace_back(Kind::Ln, n);
    out.emplace_back(Kind::Pn, n);
  }
  for (int n : {1, 2, 3}) {
    out.emplace_back(Kind::L2n, n);
    out.emplace_back(Kind::P2n, n);
  }
  return out;
}

}  // namespace

TEST_CASE("order constraints") {
  CHECK_NOTHROW(TransformKind(Kind::Ln, 8));
  CHECK_THROWS_AS(TransformKind(Kind::Ln, 3), InvalidOrder);
  CHECK_THROWS_AS(TransformKind(Kind::Pn, 6), InvalidOrder);
  CHECK_THROWS_AS(TransformKind(Kind::Ln, 0), InvalidOrder);
  CHECK_NOTHROW(TransformKind(Kind::L2n, 3));
  CHECK_THROWS_AS(TransformKind(Kind::L2n, 0), InvalidOrder);
  CHECK_THROWS_AS(TransformKind(Kind::P2n, -1), InvalidOrder);
  try {
    TransformKind(Kind::Ln, 3);
  } catch (const InvalidOrder& e) {
    CHECK(std::string(e.what()).find("n must be a power of two") != std::string::npos);
  }
}

TEST_CASE("kind names and substitution powers") {
  for (const auto& k : all_kinds()) CHECK(parse_kind(kind_name(k.kind())) == k.kind());
  CHECK(parse_kind("P2N") == Kind::P2n);
  CHECK_FALSE(parse_kind("hankel").has_value());
  CHECK(TransformKind(Kind::L2n, 3).substitution_power() == 6);
  CHECK(TransformKind(Kind::Pn, 4).substitution_power() == 4);
  CHECK(TransformKind(Kind::Widder).substitution_power() == 2);
  CHECK(TransformKind(Kind::L2).laplace_type());
  CHECK_FALSE(TransformKind(Kind::Stieltjes).laplace_type());
}

TEST_CASE("kernel values") {
  CHECK(kernel(TransformKind(Kind::Laplace), 2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel(TransformKind(Kind::L2), 2.0, 0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(kernel(TransformKind(Kind::L2n, 2), 2.0, 0.5) == doctest::Approx(8.0 * std::exp(-1.0)));
  CHECK(kernel(TransformKind(Kind::Ln, 2), 2.0, 0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(kernel(TransformKind(Kind::Stieltjes), 2.0, 0.5) == doctest::Approx(0.4));
  CHECK(kernel(TransformKind(Kind::Widder), 2.0, 1.0) == doctest::Approx(0.4));
  CHECK(kernel(TransformKind(Kind::Pn, 2), 2.0, 1.0) == doctest::Approx(0.4));
  CHECK(kernel(TransformKind(Kind::P2n, 1), 2.0, 1.0) == doctest::Approx(0.4));
}

TEST_CASE("evaluation examples") {
  auto r = eval(Kind::Laplace, 1, "1", 2.0);
  CHECK(r.converged());
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));

  r = eval(Kind::L2, 1, "sin(x)", 1.0);
  CHECK(r.converged());
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI) / 4 * std::exp(-0.25)).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(0.34509711176078572).epsilon(1e-10));

  r = eval(Kind::P2n, 1, "sin(z*x)", 1.0, {{"z", 1.0}});
  CHECK(r.converged());
  CHECK(r.value == doctest::Approx(kWidderSin).epsilon(1e-10));

  // L_2n{f; y} = (1/n) L_2{f(x^(1/n)); y^n}
  const auto lhs = eval(Kind::L2n, 2, "exp(-x^4)*(1+x)", 0.8);
  const auto rhs = eval(Kind::L2, 1, "exp(-x^2)*(1+x^(1/2))", std::pow(0.8, 2));
  CHECK(lhs.value == doctest::Approx(0.5 * rhs.value).epsilon(1e-10));
}

TEST_CASE("raw examples") {
  auto r = eval(Kind::Laplace, 1, "exp(-x)", 1.0, {}, true);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  const auto red = eval(Kind::Ln, 4, "exp(-x^4)", 1.0);
  const auto raw = eval(Kind::Ln, 4, "exp(-x^4)", 1.0, {}, true);
  CHECK(std::fabs(red.value - raw.value) <= red.err_est + raw.err_est + 1e-14);
  const auto p_red = eval(Kind::P2n, 2, "exp(-x^4)", 1.0);
  const auto p_raw = eval(Kind::P2n, 2, "exp(-x^4)", 1.0, {}, true);
  CHECK(std::fabs(p_red.value - p_raw.value) <= p_red.err_est + p_raw.err_est + 1e-14);
}

TEST_CASE("closed forms") {
  // L_n{1; y} = 1/(n y^n); L_2{e^{-x^2}; y} = 1/(2(1+y^2)); S{e^{-x}; 1} = e E1(1).
  for (int n : {1, 2, 4}) {
    for (double y : {0.5, 1.0, 2.0}) CHECK(eval(Kind::Ln, n, "1", y).value == doctest::Approx(1.0 / (n * std::pow(y, n))).epsilon(1e-11));
  }
  for (double y : {0.5, 1.0, 2.0}) {
    CHECK(eval(Kind::L2, 1, "exp(-x^2)", y).value == doctest::Approx(0.5 / (1.0 + y * y)).epsilon(1e-11));
  }
  const double e_e1 = static_cast<double>(std::exp(1.0L) * oracle::e1(1.0L));
  CHECK(eval(Kind::Stieltjes, 1, "exp(-x)", 1.0).value == doctest::Approx(e_e1).epsilon(1e-11));
  CHECK(eval(Kind::Widder, 1, "exp(-x^2)", 1.0).value == doctest::Approx(0.5 * e_e1).epsilon(1e-11));
}

// Reduction-path equivalence: every kind, a decaying corpus, three points.
TEST_CASE("reduced and raw paths agree") {
  for (const auto& k : all_kinds()) {
    for (const auto& f : kDecaying) {
      for (double y : {0.5, 1.0, 2.0}) {
        TransformRequest req;
        req.kind = k;
        req.f = parse(f);
        req.point = y;
        const auto a = eval_transform(req);
        const auto b = eval_transform_raw(req);
        INFO(k.name() << " f=" << f << " y=" << y << ": " << a.value << " vs " << b.value);
        CHECK(a.converged());
        CHECK(b.converged());
        CHECK(std::fabs(a.value - b.value) <= a.err_est + b.err_est + 1e-8 * std::fabs(a.value));
      }
    }
  }
}

TEST_CASE("iterate examples") {
  auto r = iterate_l2n(parse("exp(-x^2)"), {}, 1, 1.0);
  CHECK(r.converged());
  CHECK(r.value == doctest::Approx(kL3Point).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(static_cast<double>(0.25L * std::exp(1.0L) * oracle::e1(1.0L))).epsilon(1e-9));

  r = iterate_l2n(parse("sin(z*x)"), {{"z", 1.0}}, 1, 1.0);
  CHECK(r.value == doctest::Approx(kIterSin).epsilon(1e-8));

  r = iterate_l2n(parse("0"), {}, 2, 1.0);
  CHECK(r.value == 0.0);
}

// iterate_l2n(f, n, z) = (1/2n) P_2n{f; z}
TEST_CASE("iterate identity over the corpus") {
  for (const std::string f : {"exp(-x^2)", "exp(-x^4)", "1/(1+x^2)^2"}) {
    for (int n : {1, 2, 3}) {
      for (double z : {0.5, 1.0, 2.0}) {
        const auto it = iterate_l2n(parse(f), {}, n, z);
        const auto p = eval(Kind::P2n, n, f, z);
        const double want = p.value / (2.0 * n);
        INFO("f=" << f << " n=" << n << " z=" << z << ": " << it.value << " vs " << want);
        CHECK(it.converged());
        CHECK(std::fabs(it.value - want) <= 1e-7 * std::fabs(want));
      }
    }
  }
}

TEST_CASE("parseval members") {
  auto m = parseval_members(parse("exp(-x^2)"), parse("exp(-x^2)"), {}, 1);
  CHECK(m.product_of_transforms.value == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(m.f_against_p2n_g.value == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(m.g_against_p2n_f.value == doctest::Approx(0.125).epsilon(1e-9));

  m = parseval_members(parse("0"), parse("0"), {}, 1);
  CHECK(m.product_of_transforms.value == 0.0);
  CHECK(m.f_against_p2n_g.value == 0.0);
  CHECK(m.g_against_p2n_f.value == 0.0);

  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"exp(-x^2)", "exp(-x^2)"}, {"exp(-x^2)", "exp(-4*x^2)"}, {"exp(-x^4)", "exp(-x^4)"}};
  for (const auto& [f, g] : pairs) {
    for (int n : {1, 2}) {
      m = parseval_members(parse(f), parse(g), {}, n);
      const double a = m.product_of_transforms.value;
      const double b = m.f_against_p2n_g.value;
      const double c = m.g_against_p2n_f.value;
      INFO(f << ", " << g << ", n=" << n << ": " << a << " " << b << " " << c);
      CHECK(std::fabs(a - b) <= 1e-7 * std::fabs(a));
      CHECK(std::fabs(a - c) <= 1e-7 * std::fabs(a));
      CHECK(std::fabs(b - c) <= 1e-7 * std::fabs(b));
    }
  }
  // e^{-x^4} with n = 2 is the Gaussian pair in t = x^2.
  m = parseval_members(parse("exp(-x^4)"), parse("exp(-x^4)"), {}, 2);
  CHECK(m.product_of_transforms.value == doctest::Approx(0.015625).epsilon(1e-9));
}

// L_n{f; y} = (m/n) L_m{f(x^(m/n)); y^(n/m)}
TEST_CASE("order rescaling") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {4, 1}}) {
    for (const auto& f : kDecaying) {
      const expr::Expr fe = parse(f);
      const expr::Expr g = expr::substitute(fe, parse("x^(" + std::to_string(m) + "/" + std::to_string(n) + ")"));
      for (double y : {0.5, 1.0, 2.0}) {
        TransformRequest a;
        a.kind = TransformKind(Kind::Ln, n);
        a.f = fe;
        a.point = y;
        TransformRequest b;
        b.kind = TransformKind(Kind::Ln, m);
        b.f = g;
        b.point = std::pow(y, static_cast<double>(n) / m);
        const double lhs = eval_transform(a).value;
        const double rhs = static_cast<double>(m) / n * eval_transform(b).value;
        INFO("n=" << n << " m=" << m << " f=" << f << " y=" << y);
        CHECK(std::fabs(lhs - rhs) <= 1e-8 * std::fabs(lhs));
      }
    }
  }
}

TEST_CASE("linearity in f") {
  std::mt19937 rng(20261015);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> point(0.3, 3.0);
  for (const auto& k : all_kinds()) {
    for (int trial = 0; trial < 3; ++trial) {
      const double a = coef(rng), b = coef(rng), y = point(rng);
      const std::string f = kDecaying[trial % kDecaying.size()];
      const std::string g = kDecaying[(trial + 1) % kDecaying.size()];
      TransformRequest req;
      req.kind = k;
      req.point = y;
      req.f = parse(f);
      const double tf = eval_transform(req).value;
      req.f = parse(g);
      const double tg = eval_transform(req).value;
      req.f = parse("a*(" + f + ") + b*(" + g + ")");
      req.params = {{"a", a}, {"b", b}};
      const double th = eval_transform(req).value;
      const double want = a * tf + b * tg;
      INFO(k.name() << " a=" << a << " b=" << b << " y=" << y);
      CHECK(std::fabs(th - want) <= 1e-9 * (std::fabs(a * tf) + std::fabs(b * tg)));
    }
  }
}

TEST_CASE("oscillatory f through the substitution") {
  // L_2n{sin(x^n); 1} = (1/n) L_2{sin(t); 1}
  const double base = eval(Kind::L2, 1, "sin(x)", 1.0).value;
  for (int n : {2, 3}) {
    const auto r = eval(Kind::L2n, n, "sin(x^n)", 1.0, {{"n", static_cast<double>(n)}});
    CHECK(r.converged());
    CHECK(r.value == doctest::Approx(base / n).epsilon(1e-9));
  }
  // P_2n{sin(x^n); 1} = (1/n) Widder{sin(t); 1}
  for (int n : {1, 2}) {
    const auto r = eval(Kind::P2n, n, "sin(x^n)", 1.0, {{"n", static_cast<double>(n)}});
    CHECK(r.converged());
    CHECK(r.value == doctest::Approx(kWidderSin / n).epsilon(1e-9));
  }
}

TEST_CASE("inner options") {
  quad::QuadOptions o;
  o.max_evals = 5'000'000;
  const auto in = inner_options(o);
  CHECK(in.rel_tol == doctest::Approx(o.rel_tol / 10));
  CHECK(in.max_evals == 50'000);
  CHECK(in.strategy == quad::Strategy::Auto);
  o.max_evals = 1000;
  CHECK(inner_options(o).max_evals == 20'000);
}

TEST_CASE("inner failures name the offending point") {
  // L_2{x^-3; y} diverges at 0 for every y.
  try {
    const auto r = iterate_l2n(parse("x^(-3)"), {}, 1, 1.0);
    CHECK_FALSE(r.converged());
  } catch (const InnerFailure& e) {
    CHECK(std::string(e.what()).find("inner transform failed at y = ") != std::string::npos);
    CHECK(e.at() > 0.0);
  }
}

TEST_CASE("non-positive points are rejected") {
  TransformRequest req;
  req.kind = TransformKind(Kind::Stieltjes);
  req.f = parse("exp(-x)");
  req.point = 0.0;
  CHECK_THROWS_AS(eval_transform(req), std::invalid_argument);
  req.point = -1.0;
  CHECK_THROWS_AS(eval_transform_raw(req), std::invalid_argument);
}

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "gptrans/expr.hpp"
#include "gptrans/specfun.hpp"

using namespace gptrans::expr;

using gptrans::testing::kCorpus;

TEST_CASE("corpus round-trips through the printer") {
  CHECK(kCorpus.size() >= 30);
  for (const auto& src : kCorpus) {
    INFO(src);
    const Expr e = parse(src);
    const std::string printed = e.to_string();
    const Expr again = parse(printed);
    CHECK(again == e);
    CHECK(again.to_string() == printed);
    CHECK(again.sexpr() == e.sexpr());
  }
}

TEST_CASE("structure of parse examples") {
  CHECK(parse("x^3 * exp(-(x^4))").sexpr() == "(mul (pow x 3) (exp (neg (pow x 4))))");
  const Expr b = parse("besselj(v, 2*a*x)");
  REQUIRE(b.op() == Op::Call);
  CHECK(b.node().func == Func::Besselj);
  CHECK(b.node().args.size() == 2);
  CHECK(parameters(b) == std::set<std::string>{"a", "v"});
}

TEST_CASE("precedence") {
  CHECK(eval(parse("2+3*4^2"), 0.0) == 50.0);
  CHECK(eval(parse("-x^2"), 3.0) == -9.0);
  CHECK(eval(parse("2^3^2"), 0.0) == 512.0);
  CHECK(eval(parse("(2^3)^2"), 0.0) == 64.0);
  CHECK(eval(parse("2^-1"), 0.0) == 0.5);
  CHECK(eval(parse("8/4/2"), 0.0) == 1.0);
  CHECK(eval(parse("8-4-2"), 0.0) == 2.0);
}

TEST_CASE("eval examples") {
  CHECK(eval(parse("exp(-(x^2))"), 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(eval(parse("erfc(a*x)"), 1.0, {{"a", 0.0}}) == 1.0);
  CHECK(eval(parse("x^v * besselj(v, 2*a*x)"), 0.5, {{"v", 0.0}, {"a", 1.0}}) ==
        doctest::Approx(0.76519768655796655).epsilon(1e-14));
  CHECK(eval(parse("pi"), 0.0) == doctest::Approx(M_PI).epsilon(1e-16));
  CHECK(eval(parse("gamma(0.5)^2"), 0.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(eval(parse("e1(1)"), 0.0) == doctest::Approx(0.21938393439552027).epsilon(1e-14));
}

TEST_CASE("error contract: positions and kinds") {
  auto fails = [](const std::string& src, ParseErrorKind kind, std::size_t pos) {
    INFO(src);
    try {
      parse(src);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == kind);
      CHECK(e.position() == pos);
      CHECK(std::string(e.what()).find("position " + std::to_string(pos)) != std::string::npos);
    }
  };
  fails("sin(", ParseErrorKind::Syntax, 4);
  fails("2x", ParseErrorKind::Lexical, 1);
  fails("besselj(1)", ParseErrorKind::Arity, 0);
  fails("x $ 2", ParseErrorKind::Lexical, 2);
  fails("", ParseErrorKind::Syntax, 0);
  fails("(x+1", ParseErrorKind::Syntax, 4);
  fails("x+*2", ParseErrorKind::Syntax, 2);
  fails("exp(1, 2)", ParseErrorKind::Arity, 0);
  fails("foo(x)", ParseErrorKind::Syntax, 0);
  fails("x 2", ParseErrorKind::Syntax, 2);

  try {
    parse("sin(");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
  }
}

TEST_CASE("unbound parameters are named") {
  try {
    eval(parse("exp(-a*x)"), 1.0);
    FAIL("no error");
  } catch (const UnboundParameter& e) {
    CHECK(e.name() == "a");
  }
  CHECK_THROWS_AS(compile(parse("b*x")), UnboundParameter);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval(parse("x^0.5"), -1.0), gptrans::specfun::DomainError);
  CHECK_THROWS_AS(eval(parse("besselj(-1, x)"), 1.0), gptrans::specfun::DomainError);
  CHECK(eval(parse("x^2"), -3.0) == 9.0);
  CHECK(eval(parse("x^3"), -2.0) == -8.0);
}

TEST_CASE("compiled form agrees bit for bit with the tree") {
  const ParamMap p{{"n", 2.0}, {"a", 0.75}, {"v", 0.5}, {"y", 1.25}, {"z", 0.5}, {"b", 1.5}, {"c", 0.25}, {"s", 0.3}};
  for (const auto& src : kCorpus) {
    const Expr e = parse(src);
    const Compiled c = compile(e, p);
    for (double x : {0.125, 0.5, 1.0, 1.7, 3.0}) {
      INFO(src << " at " << x);
      const double a = eval(e, x, p);
      const double b = c(x);
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const Expr e = parse("x^(n*v)*besselj(v, 2*a^n*x^n)");
  const ParamMap p{{"n", 2.0}, {"a", 0.8}, {"v", 1.5}};
  const double first = eval(e, 1.3, p);
  for (int i = 0; i < 100; ++i) CHECK(eval(e, 1.3, p) == first);
}

TEST_CASE("bind folds constants") {
  const Expr e = bind(parse("exp(-a*x)*sqrt(a)"), {{"a", 4.0}});
  CHECK(parameters(e).empty());
  CHECK(eval(e, 0.5) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(bind(parse("2*n"), {{"n", 3.0}}) == Expr::number(6.0));
  CHECK(bind(parse("x*n"), {}).depends_on_x());
}

TEST_CASE("substitute") {
  const Expr f = parse("exp(-x^2)");
  const Expr g = substitute(f, parse("x^(1/n)"));
  const ParamMap p{{"n", 2.0}};
  for (double x : {0.3, 1.0, 2.5}) CHECK(eval(g, x, p) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
  CHECK(substitute(parse("a+1"), parse("x^2")) == parse("a+1"));
}

TEST_CASE("classification examples") {
  auto d = classify_decay(parse("exp(-(x^4))"));
  CHECK(d.kind == DecayKind::ExpDecay);
  CHECK(d.power == 4.0);

  d = classify_decay(parse("sin(x^2)"));
  REQUIRE(d.kind == DecayKind::Oscillatory);
  CHECK(d.period == doctest::Approx(2 * M_PI));
  CHECK(d.power == 2.0);
  CHECK(d.phase == 0.0);

  CHECK(classify_decay(parse("erfc(x)")).kind == DecayKind::BoundedUnknown);

  d = classify_decay(parse("1/(1+x^2)^2"));
  CHECK(d.kind == DecayKind::Algebraic);
  CHECK(d.tail_exponent == -4.0);

  d = classify_decay(parse("cos(x^n)/x^n"), {{"n", 2.0}});
  REQUIRE(d.kind == DecayKind::Oscillatory);
  CHECK(d.power == 2.0);
  CHECK(d.phase == doctest::Approx(M_PI / 2));

  d = classify_decay(parse("sin(z*x)"), {{"z", 2.0}});
  REQUIRE(d.kind == DecayKind::Oscillatory);
  CHECK(d.period == doctest::Approx(M_PI));

  CHECK(classify_decay(parse("exp(-a*x^2)*x"), {{"a", 3.0}}).kind == DecayKind::ExpDecay);
  CHECK(classify_decay(parse("exp(x)")).kind != DecayKind::ExpDecay);
}

TEST_CASE("function names") {
  for (auto f : {Func::Exp, Func::Sin, Func::Cos, Func::Sqrt, Func::Abs, Func::Ln, Func::Erfc, Func::Erfcx,
                 Func::Besselj, Func::Gamma, Func::E1}) {
    const std::string name(function_name(f));
    const std::size_t arity = function_arity(f);
    std::string src = name + "(x";
    for (std::size_t i = 1; i < arity; ++i) src += ", x";
    src += ")";
    INFO(src);
    const Expr e = parse(src);
    CHECK(e.node().func == f);
  }
}

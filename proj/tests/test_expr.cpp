#include "dopsolve/errors.hpp"
#include "dopsolve/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace dopsolve;
namespace ex = dopsolve::expr;

TEST(Expr, Examples) {
  EXPECT_EQ(ex::parse("2*x^2")(3.0), 18.0);
  EXPECT_EQ(ex::parse("-x^2")(2.0), -4.0);
  EXPECT_EQ(ex::parse("2/x^2 - 1/x")(2.0), 0.0);
  EXPECT_EQ(ex::parse("30*exp(-x)")(0.0), 30.0);
  EXPECT_EQ(ex::parse("pi")(123.0), 3.141592653589793);
  EXPECT_THROW(ex::parse("sqrt(x)")(-1.0), EvalError);
}

TEST(Expr, NumbersAndWhitespace) {
  EXPECT_EQ(ex::parse("  2.5e-3 ")(0.0), 2.5e-3);
  EXPECT_EQ(ex::parse("\t3 *\n z")(2.0), 6.0);
  EXPECT_DOUBLE_EQ(ex::parse("5*z^2")(0.5), 1.25);
}

TEST(Expr, Functions) {
  const double x = 0.3;
  EXPECT_DOUBLE_EQ(ex::parse("sin(x)")(x), std::sin(x));
  EXPECT_DOUBLE_EQ(ex::parse("cos(x)")(x), std::cos(x));
  EXPECT_DOUBLE_EQ(ex::parse("tan(x)")(x), std::tan(x));
  EXPECT_DOUBLE_EQ(ex::parse("exp(x)")(x), std::exp(x));
  EXPECT_DOUBLE_EQ(ex::parse("log(x)")(x), std::log(x));
  EXPECT_DOUBLE_EQ(ex::parse("sqrt(x)")(x), std::sqrt(x));
  EXPECT_DOUBLE_EQ(ex::parse("abs(-x)")(x), x);
  EXPECT_DOUBLE_EQ(ex::parse("sinh(x)")(x), std::sinh(x));
  EXPECT_DOUBLE_EQ(ex::parse("cosh(x)")(x), std::cosh(x));
  EXPECT_DOUBLE_EQ(ex::parse("tanh(x)")(x), std::tanh(x));
}

// Every pair of binary operators, checked against hand-parenthesized forms.
TEST(Expr, PrecedenceMatrix) {
  const double a = 7.0, b = 3.0, c = 2.0;
  const struct {
    const char* op;
    int prec;
    double (*f)(double, double);
  } ops[] = {
      {"+", 1, [](double l, double r) { return l + r; }},
      {"-", 1, [](double l, double r) { return l - r; }},
      {"*", 2, [](double l, double r) { return l * r; }},
      {"/", 2, [](double l, double r) { return l / r; }},
      {"^", 3, [](double l, double r) { return std::pow(l, r); }},
  };
  for (const auto& o1 : ops) {
    for (const auto& o2 : ops) {
      const std::string src = "7" + std::string(o1.op) + "3" + o2.op + "2";
      double expected = 0.0;
      if (o1.prec == 3 && o2.prec == 3) {
        expected = o1.f(a, o2.f(b, c));  // right-associative
      } else if (o2.prec > o1.prec) {
        expected = o1.f(a, o2.f(b, c));
      } else {
        expected = o2.f(o1.f(a, b), c);
      }
      EXPECT_DOUBLE_EQ(ex::parse(src)(0.0), expected) << src;
    }
  }
}

TEST(Expr, UnaryMinusBindsLooserThanPower) {
  EXPECT_EQ(ex::parse("-2^2")(0.0), -4.0);
  EXPECT_EQ(ex::parse("(-2)^2")(0.0), 4.0);
  EXPECT_EQ(ex::parse("2^-1")(0.0), 0.5);
  EXPECT_EQ(ex::parse("--x")(3.0), 3.0);
  EXPECT_EQ(ex::parse("2*-x")(3.0), -6.0);
}

TEST(Expr, SyntaxErrorsReportOffsetAndExpected) {
  try {
    ex::parse("2x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 1u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    ex::parse("(1 + 2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    ex::parse("foo(x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    EXPECT_EQ(e.offset(), 0u);
  }
  EXPECT_THROW(ex::parse(""), ParseError);
  EXPECT_THROW(ex::parse("1 +"), ParseError);
  EXPECT_THROW(ex::parse("sin x"), ParseError);
  EXPECT_THROW(ex::parse("1e"), ParseError);
}

TEST(Expr, DomainErrorsCarryX) {
  try {
    ex::parse("log(x)")(-2.0);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.x(), -2.0);
  }
  EXPECT_THROW(ex::parse("1/x")(0.0), EvalError);
  EXPECT_THROW(ex::parse("log(x)")(0.0), EvalError);
  EXPECT_THROW(ex::parse("x^0.5")(-1.0), EvalError);
}

TEST(Expr, DeepNestingIsAnErrorNotACrash) {
  const std::string deep = std::string(5000, '(') + "1" + std::string(5000, ')');
  EXPECT_THROW(ex::parse(deep), ParseError);
  const std::string minus(5000, '-');
  EXPECT_THROW(ex::parse(minus + "1"), ParseError);
}

TEST(Expr, RoundTrip) {
  for (const char* src : {"2*x^2", "-x^2", "2/x^2 - 1/x", "30*exp(-x)",
                          "(3 - 25*x^2 + 5*x^3)*exp(-x)", "x^2^3", "-(x-1)/-(2)",
                          "sin(cos(tan(abs(x))))", "0.1 + 1e-300 * pi", "5*z^2"}) {
    const ex::Expr e = ex::parse(src);
    const ex::Expr again = ex::parse(ex::print(e));
    EXPECT_TRUE(e == again) << src << " -> " << ex::print(e);
    EXPECT_EQ(ex::print(e), ex::print(again));
  }
}

TEST(Expr, Deterministic) {
  const ex::Expr e = ex::parse("sin(x)^2 + cos(3*x)/(1+x^2)");
  for (double x : {0.1, 1.7, -4.2}) EXPECT_EQ(e(x), ex::parse("sin(x)^2 + cos(3*x)/(1+x^2)")(x));
}

TEST(Expr, FuzzNeverCrashes) {
  const char* tokens[] = {"x", "z", "pi", "1", "2.5", "1e3", "+", "-", "*", "/", "^",
                          "(", ")", "sin", "log", "sqrt", " ", "foo", ".", "e", "#"};
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(std::size(tokens)) - 1);
  int parsed = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::string src;
    while (src.size() < 64) {
      const std::string t = tokens[pick(gen)];
      if (src.size() + t.size() > 64) break;
      src += t;
      if (pick(gen) < 2) break;
    }
    try {
      const ex::Expr e = ex::parse(src);
      ++parsed;
      try {
        (void)e(0.7);
      } catch (const EvalError&) {
      }
      EXPECT_TRUE(ex::parse(ex::print(e)) == e) << src;
    } catch (const ParseError&) {
    }
  }
  EXPECT_GT(parsed, 0);
}

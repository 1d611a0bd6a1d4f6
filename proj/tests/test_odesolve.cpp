#include "dopsolve/errors.hpp"
#include "dopsolve/odesolve.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dopsolve;

namespace {

ScalarFunction constant(double c) {
  return [c](double) { return c; };
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

Vector apply(const NodeGrid& g, double (*f)(double)) { return g.x().unaryExpr(f); }

}  // namespace

TEST(Assemble, SumOfScaledPowers) {
  const NodeGrid g = make_grid(GridKind::kUniform, 15, 0, 1);
  const DiffOperator d = local_diffmat(g, 5);
  const OdeOperator op = assemble_operator(
      d, {{2, constant(1.0)}, {1, [](double x) { return x; }}, {0, constant(-2.0)}});
  const Matrix expected =
      d.d * d.d + g.x().asDiagonal() * d.d - 2.0 * Matrix::Identity(15, 15);
  EXPECT_LT((op.l - expected).norm(), 1e-10 * expected.norm());
  ASSERT_EQ(op.terms.size(), 3u);
  EXPECT_EQ(op.terms[1].coeff, g.x());
}

TEST(Assemble, Errors) {
  const NodeGrid g = make_grid(GridKind::kUniform, 15, -1, 1);
  const DiffOperator d = local_diffmat(g, 5);
  EXPECT_THROW(assemble_operator(d, {{1, constant(1)}, {1, constant(2)}}), InvalidInputError);
  EXPECT_THROW(assemble_operator(d, {{-1, constant(1)}}), InvalidInputError);
  try {
    assemble_operator(d, {{0, [](double x) { return 1.0 / x; }}});
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.x(), 0.0);
    EXPECT_NE(std::string(e.what()).find("node 7"), std::string::npos) << e.what();
  }
}

TEST(CheckRank, Examples) {
  const NodeGrid g = make_grid(GridKind::kUniform, 20, 0, 1);
  const OdeOperator op = assemble_operator(local_diffmat(g, 5), {{2, constant(1.0)}});
  ConstraintSet cs(20);
  EXPECT_FALSE(check_rank(op, cs));
  cs.add(value_constraint(g, 0.0, 0.0));
  EXPECT_FALSE(check_rank(op, cs));
  cs.add(value_constraint(g, 1.0, 0.0));
  EXPECT_TRUE(check_rank(op, cs));
}

TEST(SolveLse, MatchesKktOracle) {
  const NodeGrid g = make_grid(GridKind::kChebyshev1, 40, 0, 3);
  const DiffOperator d = local_diffmat(g, 7);
  const OdeOperator op =
      assemble_operator(d, {{2, constant(1.0)}, {1, [](double x) { return std::cos(x); }}, {0, constant(0.5)}});
  const Vector rhs = g.x().array().sin().matrix();
  ConstraintSet cs(40);
  cs.add(value_constraint(g, g.front(), 1.0));
  cs.add(derivative_constraint(d, 1, g.back(), -2.0));
  const OdeSolution s = solve_lse(op, rhs, cs);
  const Vector ref = oracle::kkt_lse(op.l, rhs, cs.c(), cs.d());
  EXPECT_LT(max_abs(s.y - ref), 1e-8 * max_abs(ref));
  EXPECT_LT(s.constraint_residual, 1e-9);
  EXPECT_TRUE(s.rank_ok);
  EXPECT_EQ(s.method, SolveMethod::kLse);
  EXPECT_EQ(to_string(s.method), "lse");
}

TEST(SolveLse, PolynomialClosure) {
  // Solutions in the span of the segment polynomials are reproduced exactly.
  const NodeGrid g = make_grid(GridKind::kUniform, 30, -1, 2);
  const DiffOperator d = local_diffmat(g, 7);
  const OdeOperator op = assemble_operator(d, {{2, constant(1.0)}, {0, constant(3.0)}});
  const Vector y = (g.x().array().pow(5) - 2.0 * g.x().array()).matrix();
  const Vector rhs = (20.0 * g.x().array().pow(3) + 3.0 * y.array()).matrix();
  ConstraintSet cs(30);
  cs.add(value_constraint(g, -1.0, y(0)));
  cs.add(value_constraint(g, 2.0, y(29)));
  EXPECT_LT(max_abs(solve_lse(op, rhs, cs).y - y), 1e-9);
}

TEST(SolveLse, InconsistentConstraintsRaise) {
  const NodeGrid g = make_grid(GridKind::kUniform, 20, 0, 1);
  const OdeOperator op = assemble_operator(local_diffmat(g, 5), {{1, constant(1.0)}});
  ConstraintSet cs(20);
  cs.add(value_constraint(g, 0.0, 1.0));
  cs.add(value_constraint(g, 0.0, 2.0));
  EXPECT_THROW(solve_lse(op, Vector::Zero(20), cs), ConstraintInconsistencyError);
  EXPECT_THROW(solve_lse(op, Vector::Zero(19), cs), InvalidInputError);
}

TEST(SolveRegularized, FullOrderEqualsLse) {
  const NodeGrid g = make_grid(GridKind::kUniform, 35, 0, 2);
  const DiffOperator d = local_diffmat(g, 9);
  const OdeOperator op = assemble_operator(d, {{2, constant(1.0)}, {1, constant(-1.0)}});
  const Vector rhs = g.x().array().exp().matrix();
  ConstraintSet cs(35);
  cs.add(value_constraint(g, 0.0, 1.0));
  cs.add(derivative_constraint(d, 1, 0.0, 0.0));
  const OdeSolution lse = solve_lse(op, rhs, cs);
  const OdeSolution reg = solve_regularized(op, rhs, cs, 35);
  EXPECT_LT(max_abs(lse.y - reg.y), 1e-9 * max_abs(lse.y));
  EXPECT_EQ(reg.method, SolveMethod::kRegularized);
  EXPECT_THROW(solve_regularized(op, rhs, cs, 0), InvalidInputError);
  EXPECT_THROW(solve_regularized(op, rhs, cs, 36), InvalidInputError);
}

TEST(SolveHomogeneous, SineExampleAllMethodsAgree) {
  // y'' = -sin(x), y(0) = y(pi) = 0  =>  y = sin(x).
  const NodeGrid g = make_grid(GridKind::kUniform, 60, 0, M_PI);
  const DiffOperator d = local_diffmat(g, 11);
  const OdeOperator op = assemble_operator(d, {{2, constant(1.0)}});
  const Vector rhs = -apply(g, [](double x) { return std::sin(x); });
  ConstraintSet cs(60);
  cs.add(value_constraint(g, 0.0, 0.0));
  cs.add(value_constraint(g, M_PI, 0.0));
  const Vector exact = apply(g, [](double x) { return std::sin(x); });

  const OdeSolution direct = solve_homogeneous(op, rhs, constrained_basis(synth_dop(g, 60), cs));
  const OdeSolution lse = solve_lse(op, rhs, cs);
  const OdeSolution reg = solve_regularized(op, rhs, cs, 30);
  EXPECT_LT(max_abs(direct.y - exact), 1e-8);
  EXPECT_LT(max_abs(lse.y - exact), 1e-8);
  EXPECT_LT(max_abs(reg.y - exact), 1e-8);
  EXPECT_LT(max_abs(direct.y - lse.y), 1e-9);
  EXPECT_EQ(direct.method, SolveMethod::kHomogeneousDirect);

  ConstraintSet inhom(60);
  inhom.add(value_constraint(g, 0.0, 1.0));
  inhom.add(value_constraint(g, M_PI, 0.0));
  EXPECT_THROW(solve_homogeneous(op, rhs, constrained_basis(synth_dop(g, 60), inhom)), InvalidInputError);
}

TEST(SolveLse, InitialAndTerminalConditionsGiveTheSameSolution) {
  // y' = y on [0, 1]: y(0) = 1 or y(1) = e.
  const NodeGrid g = make_grid(GridKind::kUniform, 41, 0, 1);
  const DiffOperator d = local_diffmat(g, 9);
  const OdeOperator op = assemble_operator(d, {{1, constant(1.0)}, {0, constant(-1.0)}});
  ConstraintSet start(41), end(41);
  start.add(value_constraint(g, 0.0, 1.0));
  end.add(value_constraint(g, 1.0, std::exp(1.0)));
  const Vector exact = apply(g, [](double x) { return std::exp(x); });
  const Vector a = solve_lse(op, Vector::Zero(41), start).y;
  const Vector b = solve_lse(op, Vector::Zero(41), end).y;
  EXPECT_LT(max_abs(a - exact), 1e-10);
  EXPECT_LT(max_abs(b - exact), 1e-10);
}

TEST(SolveLse, RedundantConstraintDoesNotChangeSolution) {
  const NodeGrid g = make_grid(GridKind::kMapped, 85, 0, 5, expr::parse("5*z^2"));
  const DiffOperator d = local_diffmat(g, 13);
  const OdeOperator op =
      assemble_operator(d, {{2, constant(1.0)}, {1, constant(6.0)}, {0, constant(9.0)}});
  ConstraintSet cs(85);
  cs.add(value_constraint(g, 0.0, 10.0));
  cs.add(derivative_constraint(d, 1, 0.0, -75.0));
  const Vector y = solve_lse(op, Vector::Zero(85), cs).y;
  ConstraintSet twice = cs;
  twice.add(value_constraint(g, 0.0, 10.0));
  EXPECT_TRUE(twice.redundant());
  const Vector y2 = solve_lse(op, Vector::Zero(85), twice).y;
  EXPECT_LT(max_abs(y - y2), 1e-10 * max_abs(y));
  const Vector exact = g.x().unaryExpr([](double x) { return 10 * std::exp(-3 * x) - 45 * x * std::exp(-3 * x); });
  EXPECT_LT(max_abs(y - exact), 1e-9);
}

TEST(Rk4, Examples) {
  const NodeGrid g = make_grid(GridKind::kUniform, 21, 0, 1);
  const Vector e = rk4_reference({{1, constant(1.0)}, {0, constant(-1.0)}}, constant(0.0), {1.0}, g);
  EXPECT_LT(max_abs(e - apply(g, [](double x) { return std::exp(x); })), 1e-10);
  const NodeGrid h = make_grid(GridKind::kUniform, 31, 0, M_PI);
  const Vector s = rk4_reference({{2, constant(1.0)}, {0, constant(1.0)}}, constant(0.0), {0.0, 1.0}, h);
  EXPECT_LT(max_abs(s - apply(h, [](double x) { return std::sin(x); })), 1e-8);
  EXPECT_THROW(rk4_reference({{2, constant(1.0)}}, constant(0.0), {0.0}, h), InvalidInputError);
  EXPECT_THROW(rk4_reference({{2, [](double x) { return x; }}}, constant(0.0), {0.0, 1.0}, h), EvalError);
}

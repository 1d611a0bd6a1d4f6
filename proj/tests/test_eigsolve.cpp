#include "dopsolve/eigsolve.hpp"
#include "dopsolve/errors.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dopsolve;

namespace {

ScalarFunction constant(double c) {
  return [c](double) { return c; };
}

SlProblem string_problem(GridKind kind, Index n, std::optional<Index> k = std::nullopt,
                         EigenMethod method = EigenMethod::kGeneral) {
  NodeGrid g = make_grid(kind, n, 0, M_PI);
  ConstraintSet cs(n);
  cs.add(value_constraint(g, 0.0, 0.0));
  cs.add(value_constraint(g, M_PI, 0.0));
  return {constant(1.0), constant(0.0), constant(1.0), g, cs, k, method};
}

}  // namespace

TEST(StringEigen, LowModesAreSquares) {
  const SlProblem prob = string_problem(GridKind::kUniform, 100);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  for (int j = 0; j < 10; ++j) {
    const double exact = (j + 1.0) * (j + 1.0);
    EXPECT_NEAR(sol.lambdas(j), exact, 1e-6 * exact) << j;
  }
  for (Index j = 1; j < sol.lambdas.size(); ++j) EXPECT_LE(sol.lambdas(j - 1), sol.lambdas(j));
}

TEST(StringEigen, Dimensions) {
  const SlProblem prob = string_problem(GridKind::kChebyshev1Scaled, 60, 20);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  EXPECT_EQ(sol.lambdas.size(), 20);
  EXPECT_EQ(sol.functions.rows(), 60);
  EXPECT_EQ(sol.functions.cols(), 20);
  EXPECT_EQ(sol.rr_coeffs.rows(), 20);
  EXPECT_EQ(sol.admissible.cols(), 20);
  EXPECT_EQ(sol.spectrum_log.rows(), 20);
  EXPECT_LT((sol.admissible * sol.rr_coeffs - sol.functions).norm(), 1e-12);
  const SlProblem deflt = string_problem(GridKind::kUniform, 41);
  EXPECT_EQ(sl_solve(deflt, local_diffmat(deflt.grid, 7)).lambdas.size(), 20);
}

TEST(StringEigen, EigenfunctionsSatisfyBoundaryAndOscillate) {
  const SlProblem prob = string_problem(GridKind::kUniform, 100);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  for (Index j = 0; j < 20; ++j) {
    const Vector f = sol.functions.col(j);
    EXPECT_LT(std::abs(f(0)), 1e-12);
    EXPECT_LT(std::abs(f(99)), 1e-12);
    EXPECT_EQ(oracle::sign_changes(f.segment(1, 98), 1e-10), j) << j;
  }
}

TEST(StringEigen, EigenfunctionsApproximateSines) {
  const SlProblem prob = string_problem(GridKind::kUniform, 100);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  for (int j = 0; j < 8; ++j) {
    Vector s = (prob.grid.x().array() * (j + 1.0)).sin().matrix();
    s.normalize();
    const double c = std::abs(s.dot(sol.functions.col(j)));
    EXPECT_NEAR(c, 1.0, 1e-8) << j;
  }
}

TEST(StringEigen, SymmetrizedIsOrthonormal) {
  const SlProblem prob = string_problem(GridKind::kChebyshev1Scaled, 100, std::nullopt,
                                        EigenMethod::kSymmetrized);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  const Index k = sol.functions.cols();
  EXPECT_LT((sol.functions.transpose() * sol.functions - Matrix::Identity(k, k)).norm(), 1e-10);
  EXPECT_EQ(sol.max_imag, 0.0);
}

TEST(StringEigen, GeneralLowModesNearlyOrthonormalOnUniformGrid) {
  const SlProblem prob = string_problem(GridKind::kUniform, 100);
  const EigenSolution sol = sl_solve(prob, local_diffmat(prob.grid, 13));
  const Matrix f = sol.functions.leftCols(12);
  EXPECT_LT((f.transpose() * f - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(StringEigen, GalerkinResidual) {
  const SlProblem prob = string_problem(GridKind::kChebyshev1Scaled, 100);
  const DiffOperator d = local_diffmat(prob.grid, 13);
  const ReducedProblem red = sl_reduce(prob, d);
  const EigenSolution sol = sl_solve(prob, d);
  const Index k = sol.lambdas.size();
  for (Index j = 0; j < k / 4; ++j) {
    const Vector v = sol.rr_coeffs.col(j);
    const double r = (-red.la * v - sol.lambdas(j) * v).norm();
    EXPECT_LT(r, 1e-4 * std::max(1.0, std::abs(sol.lambdas(j)))) << j;
  }
}

TEST(StringEigen, FullSpaceResidual) {
  for (GridKind kind : {GridKind::kChebyshev1Scaled, GridKind::kUniform}) {
    const SlProblem prob = string_problem(kind, 100);
    const DiffOperator d = local_diffmat(prob.grid, 13);
    const EigenSolution sol = sl_solve(prob, d);
    const Matrix dpd = d.d * d.d;
    for (Index j = 0; j < sol.lambdas.size() / 4; ++j) {
      const Vector y = sol.functions.col(j);
      EXPECT_LT((dpd * y + sol.lambdas(j) * y).norm() / y.norm(), 1e-4) << to_string(kind) << " " << j;
    }
  }
}

TEST(WeightedEigen, ConstantWeightScalesEigenvalues) {
  SlProblem prob = string_problem(GridKind::kUniform, 80, 30);
  const DiffOperator d = local_diffmat(prob.grid, 11);
  const Vector base = sl_solve(prob, d).lambdas;
  prob.w = constant(4.0);
  const Vector scaled = sl_solve(prob, d).lambdas;
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(scaled(j), base(j) / 4.0, 1e-9 * base(j)) << j;
}

TEST(GeneralizedEigen, MatchesSturmLiouvilleForString) {
  const SlProblem prob = string_problem(GridKind::kUniform, 80, 30);
  const DiffOperator d = local_diffmat(prob.grid, 11);
  const Vector sl = sl_solve(prob, d).lambdas;
  const EigenSolution ge =
      generalized_eig_solve(-(d.d * d.d), prob.boundary, synth_dop(prob.grid, 32), 30);
  EXPECT_LT((ge.lambdas - sl).cwiseAbs().maxCoeff(), 1e-8 * sl.cwiseAbs().maxCoeff());
  EXPECT_THROW(generalized_eig_solve(d.d, prob.boundary, synth_dop(prob.grid, 31), 30),
               InvalidInputError);
}

TEST(ReducedEig, OrderingAndSign) {
  const Matrix a = make_matrix(3, 3, std::vector<double>{2, 1, 0, 0, -1, 0, 0, 0, 5});
  for (EigenMethod m : {EigenMethod::kGeneral, EigenMethod::kSymmetrized}) {
    const RealEig e = reduced_eig(a, m);
    for (Index j = 0; j + 1 < e.values.size(); ++j) EXPECT_LE(e.values(j), e.values(j + 1));
    for (Index j = 0; j < e.vectors.cols(); ++j) {
      Index arg = 0;
      e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(e.vectors(arg, j), 0.0);
      EXPECT_NEAR(e.vectors.col(j).norm(), 1.0, 1e-14);
    }
  }
  const RealEig g = reduced_eig(a, EigenMethod::kGeneral);
  EXPECT_NEAR(g.values(0), -1.0, 1e-14);
  EXPECT_NEAR(g.values(2), 5.0, 1e-14);
  EXPECT_NEAR(asymmetry(a), std::sqrt(2.0) / a.norm(), 1e-15);
}

TEST(SturmLiouville, Errors) {
  SlProblem prob = string_problem(GridKind::kUniform, 40);
  const DiffOperator d = local_diffmat(prob.grid, 7);
  SlProblem bad = prob;
  bad.p = [](double x) { return x - 1.0; };
  EXPECT_THROW(sl_solve(bad, d), InvalidInputError);
  bad = prob;
  bad.num_admissible = 39;
  EXPECT_THROW(sl_solve(bad, d), InvalidInputError);
  bad = prob;
  ConstraintSet inhom(40);
  inhom.add(value_constraint(prob.grid, 0.0, 1.0));
  bad.boundary = inhom;
  EXPECT_THROW(sl_solve(bad, d), InvalidInputError);
  EXPECT_THROW(sl_solve(prob, local_diffmat(make_grid(GridKind::kUniform, 41, 0, M_PI), 7)),
               InvalidInputError);
}

#pragma once

// Discretization of linear ODEs  sum_k p_k(x) y^(k)(x) = g(x)  as L y = g
// with linear constraints, and the three solution routes: equality-
// constrained least squares, spectrally regularized least squares, and the
// direct solve over a homogeneously constrained basis.

#include "dopsolve/constraints.hpp"
#include "dopsolve/diffop.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace dopsolve {

using ScalarFunction = std::function<double(double)>;

struct OdeTerm {
  int order = 0;
  ScalarFunction coeff;
};

struct SampledTerm {
  int order = 0;
  Vector coeff;  // p_k(x_i)
};

struct OdeOperator {
  Matrix l;
  std::vector<SampledTerm> terms;
  NodeGrid grid;
  DiffOperator diff;
};

enum class SolveMethod { kLse, kRegularized, kHomogeneousDirect };

std::string_view to_string(SolveMethod method);

struct OdeSolution {
  Vector y;
  double residual_norm = 0.0;        // ||L y - g||_2
  double constraint_residual = 0.0;  // ||C^T y - d||_inf
  bool rank_ok = true;
  SolveMethod method = SolveMethod::kLse;
};

// Samples `f` on the grid; EvalError names the failing node.
Vector sample(const ScalarFunction& f, const NodeGrid& grid, const char* what);

// L = sum_k diag(p_k) D^k (order 0 contributes diag(p_0)).
OdeOperator assemble_operator(const DiffOperator& diff,
                              const std::vector<OdeTerm>& terms);

// rank([L; C^T]) == n
bool check_rank(const OdeOperator& op, const ConstraintSet& cs);

OdeSolution solve_lse(const OdeOperator& op, const Vector& g,
                      const ConstraintSet& cs);

// y = B_r alpha with B_r the first r DOP columns on the operator's grid.
OdeSolution solve_regularized(const OdeOperator& op, const Vector& g,
                              const ConstraintSet& cs, Index r);

// y = B_c (L B_c)^+ g for homogeneous constraints captured in `bc`.
OdeSolution solve_homogeneous(const OdeOperator& op, const Vector& g,
                              const ConstrainedBasis& bc);

// Fixed-step classical RK4 on the companion first-order system, `substeps`
// steps between consecutive nodes. `initial` holds y, y', ..., y^(k-1) at
// the first node.
Vector rk4_reference(const std::vector<OdeTerm>& terms, const ScalarFunction& g,
                     const std::vector<double>& initial, const NodeGrid& grid,
                     int substeps = 10);

}  // namespace dopsolve

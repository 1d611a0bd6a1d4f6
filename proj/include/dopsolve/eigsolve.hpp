#pragma once

// Discrete Rayleigh-Ritz eigensolvers over weighted, constrained and
// truncated (admissible) DOP bases.
//
// Sturm-Liouville form:  -(p y')' + g y = lambda w y  with homogeneous
// boundary constraints, discretized as (D P D - G) y = -lambda W y and
// reduced onto y = B_a alpha.

#include "dopsolve/constraints.hpp"
#include "dopsolve/odesolve.hpp"

#include <optional>

namespace dopsolve {

// The reduced matrix B_a^T (D P D - G) B_a is not symmetric on non-uniform
// grids; kGeneral keeps it as is, kSymmetrized uses (L_a + L_a^T) / 2.
enum class EigenMethod { kGeneral, kSymmetrized };

struct SlProblem {
  ScalarFunction p;
  ScalarFunction g;
  ScalarFunction w;
  NodeGrid grid;
  ConstraintSet boundary;
  std::optional<Index> num_admissible;  // default n / 2
  EigenMethod method = EigenMethod::kGeneral;
};

struct EigenSolution {
  Vector lambdas;       // ascending
  Matrix functions;     // n x k, column i = eigenfunction i
  Matrix rr_coeffs;     // k x k, functions = admissible * rr_coeffs
  Matrix spectrum_log;  // log10 |rr_coeffs|
  Matrix admissible;    // B_a
  double asymmetry = 0.0;  // ||L_a - L_a^T||_F / ||L_a||_F
  double max_imag = 0.0;   // largest discarded imaginary eigenvalue part
};

struct ReducedProblem {
  Matrix la;  // k x k, as assembled
  Matrix ba;  // n x k admissible basis
  Vector weight;
  double asymmetry = 0.0;
};

// Admissible basis: the first k columns of the W-orthonormal constrained DOP
// basis. Built from k + p DOP columns, which spans the same nested subspaces
// as truncating the complete constrained basis.
Matrix admissible_basis(const NodeGrid& grid, const ConstraintSet& cs, Index k,
                        const std::optional<Vector>& weight = std::nullopt);

ReducedProblem sl_reduce(const SlProblem& prob, const DiffOperator& diff);

EigenSolution sl_solve(const SlProblem& prob, const DiffOperator& diff);

// Rayleigh-Ritz for an operator matrix `lmat`: eigenpairs of
// B_a^T lmat B_a, ascending, without sign change. `basis` needs at least
// num_admissible + p columns.
EigenSolution generalized_eig_solve(const Matrix& lmat,
                                    const ConstraintSet& constraints,
                                    const BasisSet& basis,
                                    Index num_admissible,
                                    EigenMethod method = EigenMethod::kGeneral);

// Eigenpairs of a reduced matrix, ascending; eigenvector columns have unit
// 2-norm and a positive largest-magnitude entry.
RealEig reduced_eig(const Matrix& la, EigenMethod method);
double asymmetry(const Matrix& a);

}  // namespace dopsolve

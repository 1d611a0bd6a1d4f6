#pragma once

// Dense real linear algebra used throughout the solver: factorizations with
// deterministic sign conventions, minimum-norm least squares, symmetric
// eigensolve and equality-constrained least squares.

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace dopsolve {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative threshold on |r_ii| (or pivots) below which a direction counts as
// numerically dependent.
inline constexpr double kRankTolerance = 1e-12;

// Builds a rows x cols matrix from row-major data; rejects non-finite entries
// and empty shapes.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);

// Throws InvalidInputError if any entry is NaN/Inf.
void require_finite(const Matrix& a, const char* what);

struct QrFactors {
  Matrix q;  // rows x rows, orthogonal
  Matrix r;  // rows x cols, upper trapezoidal with non-negative diagonal
  Index rank = 0;
};

struct RqFactors {
  Matrix rhat;  // rows x cols, bottom cols x cols block upper triangular
  Matrix qhat;  // cols x cols, orthogonal
};

// Full Householder QR of a tall matrix. The first `rank` columns of q span
// range(a) when a has full column rank; the trailing columns span the
// orthogonal complement.
QrFactors qr(const Matrix& a);

// a = rhat * qhat, computed by row/column reversal around a QR.
RqFactors rq(const Matrix& a);

// Lower-triangular G with G * G^T = a. Throws DefinitenessError carrying the
// failing pivot index.
Matrix cholesky(const Matrix& a);

// Minimum-norm least-squares solution of a * x ~= b (rank-revealing).
Matrix pinv_solve(const Matrix& a, const Matrix& b);
Vector pinv_solve(const Matrix& a, const Vector& b);

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

SymEig sym_eig(const Matrix& a);

struct RealEig {
  Vector values;      // real parts, ascending
  Matrix vectors;     // real parts, unit 2-norm columns
  double max_imag = 0.0;  // largest discarded imaginary part
};

// Eigen-decomposition of a general square matrix whose spectrum is
// (numerically) real. Each vector's largest-magnitude entry is positive.
RealEig real_eig(const Matrix& a);

// argmin ||l*y - g||_2 subject to c^T y = d via the nullspace method.
// c holds one constraint per column and may have zero columns.
Vector lse_solve(const Matrix& l, const Vector& g, const Matrix& c,
                 const Vector& d);

// Numerical rank using a column-pivoted QR and kRankTolerance.
Index numerical_rank(const Matrix& a);

// ||a||_F relative difference helper used by the tests and diagnostics.
double relative_frobenius(const Matrix& approx, const Matrix& exact);

}  // namespace dopsolve

#include "dopsolve/linalg.hpp"

#include "dopsolve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dopsolve {

namespace {

// Flips signs so that diag(r) >= 0; q absorbs the same flips.
void normalize_signs(Matrix& q, Matrix& r) {
  const Index k = std::min(r.rows(), r.cols());
  for (Index i = 0; i < k; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
}

Index rank_from_diagonal(const Matrix& r) {
  const Index k = std::min(r.rows(), r.cols());
  double max_diag = 0.0;
  for (Index i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));
  if (max_diag == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) > kRankTolerance * max_diag) ++rank;
  }
  return rank;
}

// Householder QR without the tall-shape precondition; used by rq on the
// transposed (wide) matrix.
void householder(const Matrix& a, Matrix& q, Matrix& r) {
  Eigen::HouseholderQR<Matrix> hqr(a);
  q = hqr.householderQ() * Matrix::Identity(a.rows(), a.rows());
  r = hqr.matrixQR().triangularView<Eigen::Upper>();
  normalize_signs(q, r);
}

}  // namespace

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  if (rows < 1 || cols < 1) {
    throw InvalidInputError("matrix shape must be at least 1x1");
  }
  if (static_cast<Index>(row_major.size()) != rows * cols) {
    throw InvalidInputError("matrix data size " +
                            std::to_string(row_major.size()) +
                            " does not match shape " + std::to_string(rows) +
                            "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = row_major[i * cols + j];
  }
  require_finite(m, "matrix");
  return m;
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InvalidInputError(std::string(what) + " contains non-finite entries");
  }
}

QrFactors qr(const Matrix& a) {
  require_finite(a, "qr input");
  if (a.rows() < a.cols()) {
    throw InvalidInputError("qr requires rows >= cols");
  }
  QrFactors f;
  householder(a, f.q, f.r);
  f.rank = rank_from_diagonal(f.r);
  return f;
}

RqFactors rq(const Matrix& a) {
  require_finite(a, "rq input");
  if (a.rows() < a.cols()) {
    throw InvalidInputError("rq requires rows >= cols");
  }
  // With P the reversal permutation, QR of P_n a^T P_m = Q1 R1 gives
  // a = (P_m R1^T P_n)(P_n Q1^T P_n).
  const Matrix flipped = a.transpose().colwise().reverse().rowwise().reverse();
  Matrix q1;
  Matrix r1;
  householder(flipped, q1, r1);
  RqFactors f;
  f.rhat = r1.transpose().colwise().reverse().rowwise().reverse();
  f.qhat = q1.transpose().colwise().reverse().rowwise().reverse();
  return f;
}

Matrix cholesky(const Matrix& a) {
  require_finite(a, "cholesky input");
  if (a.rows() != a.cols()) {
    throw InvalidInputError("cholesky requires a square matrix");
  }
  if ((a - a.transpose()).norm() > 1e-12 * std::max(1.0, a.norm())) {
    throw InvalidInputError("cholesky requires a symmetric matrix");
  }
  const Index n = a.rows();
  Matrix g = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - g.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) {
      throw DefinitenessError(
          "matrix is not positive definite at pivot " + std::to_string(j),
          static_cast<std::size_t>(j));
    }
    const double gjj = std::sqrt(pivot);
    g(j, j) = gjj;
    for (Index i = j + 1; i < n; ++i) {
      g(i, j) = (a(i, j) - g.row(i).head(j).dot(g.row(j).head(j))) / gjj;
    }
  }
  return g;
}

Matrix pinv_solve(const Matrix& a, const Matrix& b) {
  require_finite(a, "pinv_solve matrix");
  require_finite(b, "pinv_solve right-hand side");
  if (a.rows() != b.rows()) {
    throw InvalidInputError("pinv_solve: row count mismatch");
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankTolerance);
  cod.compute(a);
  return cod.solve(b);
}

Vector pinv_solve(const Matrix& a, const Vector& b) {
  return pinv_solve(a, Matrix(b)).col(0);
}

SymEig sym_eig(const Matrix& a) {
  require_finite(a, "sym_eig input");
  if (a.rows() != a.cols()) {
    throw InvalidInputError("sym_eig requires a square matrix");
  }
  if ((a - a.transpose()).norm() > 1e-10 * std::max(1.0, a.norm())) {
    throw InvalidInputError("sym_eig requires a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw Error("symmetric eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

RealEig real_eig(const Matrix& a) {
  require_finite(a, "real_eig input");
  if (a.rows() != a.cols()) {
    throw InvalidInputError("real_eig requires a square matrix");
  }
  Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw Error("eigensolver did not converge");
  }
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&ev](Index l, Index r) {
    return ev(l).real() < ev(r).real();
  });
  RealEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = ev(src).real();
    out.max_imag = std::max(out.max_imag, std::abs(ev(src).imag()));
    Vector v = es.eigenvectors().col(src).real();
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.vectors.col(i) = v;
  }
  return out;
}

Vector lse_solve(const Matrix& l, const Vector& g, const Matrix& c,
                 const Vector& d) {
  require_finite(l, "lse_solve operator");
  if (l.rows() != g.size()) {
    throw InvalidInputError("lse_solve: operator/rhs size mismatch");
  }
  if (c.cols() == 0) return pinv_solve(l, g);
  if (c.rows() != l.cols() || c.cols() != d.size()) {
    throw InvalidInputError("lse_solve: constraint shape mismatch");
  }
  require_finite(c, "lse_solve constraints");
  const Index n = c.rows();
  const Index p = c.cols();

  // Unit-norm constraint columns keep the rank test independent of how each
  // functional is scaled (derivative rows carry powers of 1/h).
  Matrix cn = c;
  Vector dn = d;
  for (Index j = 0; j < p; ++j) {
    const double s = c.col(j).norm();
    if (s == 0.0) {
      if (d(j) != 0.0) {
        throw ConstraintInconsistencyError("zero constraint with non-zero value");
      }
      continue;
    }
    cn.col(j) /= s;
    dn(j) /= s;
  }

  // c * perm = q * r; the pivoting exposes redundant constraints.
  Eigen::ColPivHouseholderQR<Matrix> cqr;
  cqr.setThreshold(kRankTolerance);
  cqr.compute(cn);
  const Index rank = cqr.rank();
  const Matrix q = cqr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = cqr.matrixR().topRows(std::min(n, p))
                       .triangularView<Eigen::Upper>();
  const Vector dp = cqr.colsPermutation().transpose() * dn;

  // c^T y = d  <=>  r^T (q^T y) = perm^T d.
  const Matrix r11 = r.topLeftCorner(rank, rank);
  const Vector w1 = r11.transpose().triangularView<Eigen::Lower>().solve(
      dp.head(rank));
  if (rank < p) {
    const Matrix r12 = r.topRightCorner(rank, p - rank);
    const Vector mismatch = r12.transpose() * w1 - dp.tail(p - rank);
    const double scale = std::max(1.0, dn.lpNorm<Eigen::Infinity>());
    if (mismatch.lpNorm<Eigen::Infinity>() > 1e-8 * scale) {
      throw ConstraintInconsistencyError(
          "constraints are linearly dependent with incompatible values");
    }
  }
  const Vector y_particular = q.leftCols(rank) * w1;
  if (rank == n) return y_particular;
  const Matrix null_basis = q.rightCols(n - rank);
  const Vector w2 =
      pinv_solve(Matrix(l * null_basis), Vector(g - l * y_particular));
  return y_particular + null_basis * w2;
}

Index numerical_rank(const Matrix& a) {
  Eigen::ColPivHouseholderQR<Matrix> cqr;
  cqr.setThreshold(kRankTolerance);
  cqr.compute(a);
  return cqr.rank();
}

double relative_frobenius(const Matrix& approx, const Matrix& exact) {
  const double denom = exact.norm();
  const double diff = (approx - exact).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace dopsolve

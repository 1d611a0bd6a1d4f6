#include "dopsolve/diffop.hpp"

#include "dopsolve/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dopsolve {

DiffOperator global_diffmat(const BasisSet& basis) {
  DiffOperator op{basis.bdot * basis.b.transpose(),
                  basis.cols() == basis.rows() ? DiffKind::kGlobal
                                               : DiffKind::kRegularizing,
                  0, basis.cols() - 1, basis.grid};
  return op;
}

DiffOperator local_diffmat(const NodeGrid& grid, Index support_length,
                           std::optional<Index> segment_degree) {
  const Index n = grid.size();
  if (support_length < 3 || support_length % 2 == 0) {
    throw InvalidInputError("support length must be odd and >= 3 (got " +
                            std::to_string(support_length) + ")");
  }
  if (support_length > n) {
    throw InvalidInputError("support length " + std::to_string(support_length) +
                            " exceeds the grid size " + std::to_string(n));
  }
  const Index degree = segment_degree.value_or(support_length - 1);
  if (degree < 1 || degree > support_length - 1) {
    throw InvalidInputError("segment degree must lie in [1, support_length - 1]");
  }
  const Index half = (support_length - 1) / 2;
  const Index segments = n - 2 * half;

  auto segment_operator = [&](Index start) {
    NodeGrid local(grid.x().segment(start, support_length), GridKind::kExplicit);
    const BasisSet bs = synth_dop(local, degree + 1);
    return Matrix(bs.bdot * bs.b.transpose());
  };

  Matrix d = Matrix::Zero(n, n);
  for (Index s = 0; s < segments; ++s) {
    const Matrix ds = segment_operator(s);
    if (s == 0) {
      d.block(0, 0, half + 1, support_length) = ds.topRows(half + 1);
    }
    if (s == segments - 1) {
      d.block(n - half - 1, n - support_length, half + 1, support_length) =
          ds.bottomRows(half + 1);
    }
    if (s != 0 && s != segments - 1) {
      d.block(s + half, s, 1, support_length) = ds.row(half);
    }
  }
  return DiffOperator{std::move(d), DiffKind::kLocal, support_length, degree,
                      grid};
}

Matrix gradient_diffmat(const NodeGrid& grid) {
  const Index n = grid.size();
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  for (Index i = 1; i < n; ++i) {
    if (std::abs(grid.x()(i) - grid.x()(i - 1) - h) > 1e-9 * std::abs(h)) {
      throw GridError("gradient operator requires a uniform grid");
    }
  }
  Matrix d = Matrix::Zero(n, n);
  d(0, 0) = -1.0;
  d(0, 1) = 1.0;
  for (Index i = 1; i + 1 < n; ++i) {
    d(i, i - 1) = -0.5;
    d(i, i + 1) = 0.5;
  }
  d(n - 1, n - 2) = -1.0;
  d(n - 1, n - 1) = 1.0;
  return d / h;
}

Matrix operator_power(const DiffOperator& d, int k) {
  if (k < 1) throw InvalidInputError("operator power must be >= 1");
  Matrix out = d.d;
  for (int i = 1; i < k; ++i) out = d.d * out;
  return out;
}

std::vector<RankDeficiency> rank_profile(const NodeGrid& grid,
                                         const std::vector<Index>& degrees) {
  std::vector<RankDeficiency> out;
  out.reserve(degrees.size());
  Index max_degree = 0;
  for (Index deg : degrees) max_degree = std::max(max_degree, deg);
  if (max_degree + 1 > grid.size()) {
    throw InvalidInputError("rank profile degree exceeds grid size - 1");
  }
  const BasisSet full = synth_dop(grid, max_degree + 1);
  for (Index deg : degrees) {
    if (deg < 0) throw InvalidInputError("negative degree in rank profile");
    const Index m = deg + 1;
    const Matrix d = full.bdot.leftCols(m) * full.b.leftCols(m).transpose();
    out.push_back({deg, m - numerical_rank(d)});
  }
  return out;
}

}  // namespace dopsolve

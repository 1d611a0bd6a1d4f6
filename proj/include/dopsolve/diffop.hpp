#pragma once

// Differentiating matrices built from DOP bases: global (complete basis),
// regularizing (truncated basis) and local banded operators with a constant
// approximation degree over the whole support, end rows included.

#include "dopsolve/basis.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dopsolve {

enum class DiffKind { kGlobal, kRegularizing, kLocal };

struct DiffOperator {
  Matrix d;
  DiffKind kind = DiffKind::kGlobal;
  Index support_length = 0;  // local only
  Index degree = 0;          // polynomial degree differentiated exactly
  NodeGrid grid;

  Index size() const { return d.rows(); }
};

// D = Bdot * B^T. Complete bases (m = n) give kind global, truncated ones a
// regularizing operator.
DiffOperator global_diffmat(const BasisSet& basis);

// Banded operator from overlapping segments of `support_length` nodes.
// `segment_degree` below support_length - 1 selects the approximating
// (regularized) variant.
DiffOperator local_diffmat(const NodeGrid& grid, Index support_length,
                           std::optional<Index> segment_degree = std::nullopt);

// Classical tridiagonal gradient operator (central differences inside,
// one-sided two-point formulas at the ends) on a uniform grid.
Matrix gradient_diffmat(const NodeGrid& grid);

Matrix operator_power(const DiffOperator& d, int k);

struct RankDeficiency {
  Index degree;
  Index deficiency;
};

// For each degree d: D from the first d + 1 DOP columns on `grid`,
// deficiency = (d + 1) - numerical_rank(D). The ideal value is 1.
std::vector<RankDeficiency> rank_profile(const NodeGrid& grid,
                                         const std::vector<Index>& degrees);

}  // namespace dopsolve

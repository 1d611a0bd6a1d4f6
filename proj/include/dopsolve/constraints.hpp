#pragma once

// Linear constraints c^T y = d on sampled solutions and the synthesis of
// orthonormal admissible bases that satisfy the homogeneous constraints.

#include "dopsolve/basis.hpp"
#include "dopsolve/diffop.hpp"

#include <string>
#include <vector>

namespace dopsolve {

struct Constraint {
  Vector c;
  double rhs = 0.0;
  std::string label;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(Index n) : n_(n) {}

  void add(Constraint constraint);
  void append(const ConstraintSet& other);

  Index rows() const { return n_; }
  Index count() const { return static_cast<Index>(labels_.size()); }
  bool empty() const { return labels_.empty(); }

  // n x p, one constraint per column.
  const Matrix& c() const { return c_; }
  const Vector& d() const { return d_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Index rank() const;
  bool redundant() const { return rank() < count(); }
  bool homogeneous() const;

 private:
  Index n_ = 0;
  Matrix c_;
  Vector d_;
  std::vector<std::string> labels_;
};

// e_i at the node matching `at`.
Constraint value_constraint(const NodeGrid& grid, double at, double rhs);

// Row i of D^order at the node matching `at`, as a column.
Constraint derivative_constraint(const DiffOperator& diff, int order,
                                 double at, double rhs);

// e_1 - e_n, then (row 1 - row n) of D^k for k = 1..smoothness; all rhs 0.
ConstraintSet periodic_constraints(const DiffOperator& diff, int smoothness);

struct ConstrainedBasis {
  Matrix bc;  // columns of B (minus p) satisfying C^T bc = 0
  Matrix x;   // bc = b * x, orthonormal columns, trailing block upper triangular
  ConstraintSet constraints;
};

// QR of B^T C splits span and null space; an RQ of the null block gives the
// orthonormal transform X. When `basis` is weighted, bc is W-orthonormal.
ConstrainedBasis constrained_basis(const BasisSet& basis,
                                   const ConstraintSet& cs);

}  // namespace dopsolve

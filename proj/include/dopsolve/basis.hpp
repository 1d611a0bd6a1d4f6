#pragma once

// Node grids and discrete orthonormal polynomial (DOP) bases with matched
// derivative samples.

#include "dopsolve/expr.hpp"
#include "dopsolve/linalg.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace dopsolve {

enum class GridKind {
  kUniform,          // evenly spaced, endpoints included
  kGramInterior,     // x_i = a + (b - a)(2i + 1)/(2n), strictly interior
  kChebyshev1,       // first-kind Chebyshev points mapped affinely, interior
  kChebyshev1Scaled, // first-kind Chebyshev points stretched onto [a, b]
  kMapped,           // x_i = map(z_i), z uniform on [0, 1]
  kExplicit,         // caller-provided values
};

std::string_view to_string(GridKind kind);
GridKind grid_kind_from_string(std::string_view name);

class NodeGrid {
 public:
  // Validates: n >= 2, finite, strictly increasing.
  NodeGrid(Vector x, GridKind kind);

  const Vector& x() const { return x_; }
  Index size() const { return x_.size(); }
  GridKind kind() const { return kind_; }
  double front() const { return x_(0); }
  double back() const { return x_(x_.size() - 1); }

  // Index of the node within 1e-12 * span of `at`; PlacementError otherwise.
  Index locate(double at) const;

 private:
  Vector x_;
  GridKind kind_;
};

NodeGrid make_grid(GridKind kind, Index n, double a, double b,
                   const std::optional<expr::Expr>& map = std::nullopt);

struct BasisSet {
  Matrix b;     // n x m, column j samples a degree-j polynomial
  Matrix bdot;  // n x m, derivative samples of the same polynomials
  NodeGrid grid;
  std::optional<Vector> weight;  // diagonal of W when weighted
  double quality = 0.0;          // ||I - B^T W B||_F

  Index rows() const { return b.rows(); }
  Index cols() const { return b.cols(); }
};

// Lanczos-style synthesis with complete reorthogonalization; derivatives are
// propagated through the same recurrence, projection and normalization.
BasisSet synth_dop(const NodeGrid& grid, Index m);

// B_w = B * G^{-T} with G = chol(B^T W B), so that B_w^T W B_w = I.
BasisSet weighted_basis(const BasisSet& basis, const Vector& w);

double gram_quality(const Matrix& b, const std::optional<Vector>& w = std::nullopt);

enum class ReferenceBasis { kGramSchmidt, kChebyshevRecurrence, kVandermonde };

// Baseline bases for quality comparisons. The grid is first mapped affinely
// onto [-1, 1].
Matrix reference_basis(const NodeGrid& grid, Index m, ReferenceBasis which);

}  // namespace dopsolve

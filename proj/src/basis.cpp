#include "dopsolve/basis.hpp"

#include "dopsolve/errors.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace dopsolve {

namespace {

constexpr std::array<std::pair<std::string_view, GridKind>, 6> kGridNames{{
    {"uniform", GridKind::kUniform},
    {"gram-interior", GridKind::kGramInterior},
    {"chebyshev1", GridKind::kChebyshev1},
    {"chebyshev1-scaled", GridKind::kChebyshev1Scaled},
    {"mapped", GridKind::kMapped},
    {"explicit", GridKind::kExplicit},
}};

// Ascending first-kind Chebyshev points on [-1, 1].
Vector chebyshev1_points(Index n) {
  Vector t(n);
  for (Index k = 0; k < n; ++k) {
    t(k) = -std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  }
  // Exact antisymmetry keeps the midpoint at zero for odd n.
  for (Index k = 0; k < n / 2; ++k) {
    const double s = 0.5 * (t(n - 1 - k) - t(k));
    t(k) = -s;
    t(n - 1 - k) = s;
  }
  if (n % 2 == 1) t(n / 2) = 0.0;
  return t;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(GridKind kind) {
  for (const auto& [name, k] : kGridNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

GridKind grid_kind_from_string(std::string_view name) {
  for (const auto& [n, k] : kGridNames) {
    if (n == name) return k;
  }
  throw GridError("unknown node kind '" + std::string(name) + "'");
}

NodeGrid::NodeGrid(Vector x, GridKind kind) : x_(std::move(x)), kind_(kind) {
  if (x_.size() < 2) throw GridError("a grid needs at least 2 nodes");
  if (!x_.allFinite()) throw GridError("grid contains non-finite nodes");
  for (Index i = 1; i < x_.size(); ++i) {
    if (!(x_(i) > x_(i - 1))) {
      throw GridError("grid nodes must be strictly increasing (index " +
                      std::to_string(i) + ", x = " + fmt(x_(i)) + ")");
    }
  }
}

Index NodeGrid::locate(double at) const {
  const double tol = 1e-12 * (back() - front());
  Index best = 0;
  for (Index i = 1; i < x_.size(); ++i) {
    if (std::abs(x_(i) - at) < std::abs(x_(best) - at)) best = i;
  }
  if (std::abs(x_(best) - at) > tol) {
    throw PlacementError("x = " + fmt(at) +
                             " is not a grid node (nearest node x = " +
                             fmt(x_(best)) + ")",
                         x_(best));
  }
  return best;
}

NodeGrid make_grid(GridKind kind, Index n, double a, double b,
                   const std::optional<expr::Expr>& map) {
  if (n < 2) throw GridError("a grid needs at least 2 nodes");
  if (kind != GridKind::kMapped && !(a < b)) {
    throw GridError("grid interval requires a < b");
  }
  Vector x(n);
  switch (kind) {
    case GridKind::kUniform:
      for (Index i = 0; i < n; ++i) {
        x(i) = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      }
      x(n - 1) = b;
      break;
    case GridKind::kGramInterior:
      for (Index i = 0; i < n; ++i) {
        x(i) = a + (b - a) * (2.0 * i + 1.0) / (2.0 * n);
      }
      break;
    case GridKind::kChebyshev1: {
      const Vector t = chebyshev1_points(n);
      x = a + (b - a) * 0.5 * (t.array() + 1.0);
      break;
    }
    case GridKind::kChebyshev1Scaled: {
      const Vector t = chebyshev1_points(n);
      const double t0 = t(0);
      const double t1 = t(n - 1);
      x = a + (b - a) * (t.array() - t0) / (t1 - t0);
      x(0) = a;
      x(n - 1) = b;
      break;
    }
    case GridKind::kMapped: {
      if (!map) throw GridError("mapped grid requires a map expression");
      for (Index i = 0; i < n; ++i) {
        x(i) = (*map)(static_cast<double>(i) / static_cast<double>(n - 1));
      }
      // Dense sampling catches non-monotone maps between the nodes.
      const Index samples = 8 * n;
      double prev = (*map)(0.0);
      const double sign = x(n - 1) > x(0) ? 1.0 : -1.0;
      for (Index i = 1; i <= samples; ++i) {
        const double v =
            (*map)(static_cast<double>(i) / static_cast<double>(samples));
        if (!(sign * (v - prev) > 0.0)) {
          throw GridError("node map is not strictly monotone on [0, 1]");
        }
        prev = v;
      }
      if (sign < 0.0) x.reverseInPlace();
      break;
    }
    case GridKind::kExplicit:
      throw GridError("explicit grids are constructed from node values");
  }
  return NodeGrid(std::move(x), kind);
}

BasisSet synth_dop(const NodeGrid& grid, Index m) {
  const Index n = grid.size();
  if (m < 1 || m > n) {
    throw InvalidInputError("synth_dop requires 1 <= m <= n (m = " +
                            std::to_string(m) + ", n = " + std::to_string(n) +
                            ")");
  }
  Matrix b = Matrix::Zero(n, m);
  Matrix bdot = Matrix::Zero(n, m);
  b.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

  if (m > 1) {
    const Vector centered = grid.x().array() - grid.x().mean();
    const double scale = centered.norm();
    b.col(1) = centered / scale;
    bdot.col(1).setConstant(1.0 / scale);
  }

  for (Index k = 2; k < m; ++k) {
    Vector raw = b.col(1).cwiseProduct(b.col(k - 1));
    Vector raw_dot = bdot.col(1).cwiseProduct(b.col(k - 1)) +
                     b.col(1).cwiseProduct(bdot.col(k - 1));
    const double raw_norm = raw.norm();
    // Complete reorthogonalization against every previous column.
    double norm = raw_norm;
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeff = b.leftCols(k).transpose() * raw;
      raw.noalias() -= b.leftCols(k) * coeff;
      raw_dot.noalias() -= bdot.leftCols(k) * coeff;
      const double before = norm;
      norm = raw.norm();
      // Second pass only after heavy cancellation.
      if (norm > M_SQRT1_2 * before) break;
    }
    if (!(norm > 1e-12 * raw_norm)) {
      throw DegeneracyError("basis synthesis degenerated at degree " +
                                std::to_string(k),
                            static_cast<std::size_t>(k));
    }
    b.col(k) = raw / norm;
    bdot.col(k) = raw_dot / norm;
  }

  BasisSet out{std::move(b), std::move(bdot), grid, std::nullopt, 0.0};
  out.quality = gram_quality(out.b);
  return out;
}

BasisSet weighted_basis(const BasisSet& basis, const Vector& w) {
  if (w.size() != basis.rows()) {
    throw InvalidInputError("weight vector length does not match the grid");
  }
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w(i) > 0.0) || !std::isfinite(w(i))) {
      throw DefinitenessError("weights must be positive (index " +
                                  std::to_string(i) + ")",
                              static_cast<std::size_t>(i));
    }
  }
  Matrix gram = basis.b.transpose() * w.asDiagonal() * basis.b;
  gram = 0.5 * (gram + gram.transpose());
  const Matrix g = cholesky(gram);
  // B * G^{-T} = (G^{-1} B^T)^T
  const auto lower = g.triangularView<Eigen::Lower>();
  Matrix bw = lower.solve(basis.b.transpose()).transpose();
  Matrix bwdot = lower.solve(basis.bdot.transpose()).transpose();
  BasisSet out{std::move(bw), std::move(bwdot), basis.grid, w, 0.0};
  out.quality = gram_quality(out.b, w);
  return out;
}

double gram_quality(const Matrix& b, const std::optional<Vector>& w) {
  Matrix gram;
  if (w) {
    if (w->size() != b.rows()) {
      throw InvalidInputError("weight vector length does not match basis rows");
    }
    gram = b.transpose() * w->asDiagonal() * b;
  } else {
    gram = b.transpose() * b;
  }
  return (Matrix::Identity(b.cols(), b.cols()) - gram).norm();
}

Matrix reference_basis(const NodeGrid& grid, Index m, ReferenceBasis which) {
  const Index n = grid.size();
  if (m < 1 || m > n) throw InvalidInputError("reference basis requires 1 <= m <= n");
  const Vector t = (2.0 * (grid.x().array() - grid.front()) /
                        (grid.back() - grid.front()) -
                    1.0)
                       .matrix();
  Matrix out(n, m);
  switch (which) {
    case ReferenceBasis::kVandermonde:
    case ReferenceBasis::kGramSchmidt:
      out.col(0).setOnes();
      for (Index k = 1; k < m; ++k) out.col(k) = out.col(k - 1).cwiseProduct(t);
      break;
    case ReferenceBasis::kChebyshevRecurrence:
      out.col(0).setOnes();
      if (m > 1) out.col(1) = t;
      for (Index k = 2; k < m; ++k) {
        out.col(k) = 2.0 * t.cwiseProduct(out.col(k - 1)) - out.col(k - 2);
      }
      break;
  }
  if (which == ReferenceBasis::kGramSchmidt) {
    // Classical Gram-Schmidt, one pass against the already orthonormalized
    // columns.
    const Matrix monomials = out;
    for (Index k = 0; k < m; ++k) {
      Vector v = monomials.col(k);
      for (Index j = 0; j < k; ++j) {
        v -= out.col(j).dot(monomials.col(k)) * out.col(j);
      }
      out.col(k) = v / v.norm();
    }
    return out;
  }
  for (Index k = 0; k < m; ++k) out.col(k) /= out.col(k).norm();
  return out;
}

}  // namespace dopsolve

#include "dopsolve/constraints.hpp"

#include "dopsolve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dopsolve {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Derivative functionals carry powers of 1/h; rank decisions use unit columns.
Matrix unit_columns(const Matrix& c) {
  Matrix out = c;
  for (Index j = 0; j < c.cols(); ++j) {
    const double s = c.col(j).norm();
    if (s > 0.0) out.col(j) /= s;
  }
  return out;
}

}  // namespace

void ConstraintSet::add(Constraint constraint) {
  if (n_ == 0) n_ = constraint.c.size();
  if (constraint.c.size() != n_) {
    throw InvalidInputError("constraint length " +
                            std::to_string(constraint.c.size()) +
                            " does not match grid size " + std::to_string(n_));
  }
  if (!constraint.c.allFinite() || !std::isfinite(constraint.rhs)) {
    throw InvalidInputError("constraint '" + constraint.label +
                            "' has non-finite entries");
  }
  if (count() + 1 > n_) {
    throw InvalidInputError("more constraints than grid nodes");
  }
  const Index p = count();
  c_.conservativeResize(n_, p + 1);
  c_.col(p) = constraint.c;
  d_.conservativeResize(p + 1);
  d_(p) = constraint.rhs;
  labels_.push_back(std::move(constraint.label));
}

void ConstraintSet::append(const ConstraintSet& other) {
  for (Index j = 0; j < other.count(); ++j) {
    add({other.c().col(j), other.d()(j), other.labels()[j]});
  }
}

Index ConstraintSet::rank() const {
  return empty() ? 0 : numerical_rank(unit_columns(c_));
}

bool ConstraintSet::homogeneous() const {
  return empty() || d_.cwiseAbs().maxCoeff() == 0.0;
}

Constraint value_constraint(const NodeGrid& grid, double at, double rhs) {
  const Index i = grid.locate(at);
  Vector c = Vector::Zero(grid.size());
  c(i) = 1.0;
  return {std::move(c), rhs, "y(" + fmt(at) + ") = " + fmt(rhs)};
}

Constraint derivative_constraint(const DiffOperator& diff, int order,
                                 double at, double rhs) {
  if (order < 1) throw InvalidInputError("derivative order must be >= 1");
  const Index i = diff.grid.locate(at);
  Vector c = operator_power(diff, order).row(i).transpose();
  return {std::move(c), rhs,
          "y^(" + std::to_string(order) + ")(" + fmt(at) + ") = " + fmt(rhs)};
}

ConstraintSet periodic_constraints(const DiffOperator& diff, int smoothness) {
  if (smoothness < 0) throw InvalidInputError("smoothness must be >= 0");
  const Index n = diff.size();
  ConstraintSet cs(n);
  Vector c0 = Vector::Zero(n);
  c0(0) = 1.0;
  c0(n - 1) = -1.0;
  cs.add({std::move(c0), 0.0, "y(start) - y(end) = 0"});
  Matrix power = diff.d;
  for (int k = 1; k <= smoothness; ++k) {
    if (k > 1) power = diff.d * power;
    cs.add({(power.row(0) - power.row(n - 1)).transpose(), 0.0,
            "y^(" + std::to_string(k) + ")(start) - y^(" + std::to_string(k) +
                ")(end) = 0"});
  }
  return cs;
}

ConstrainedBasis constrained_basis(const BasisSet& basis,
                                   const ConstraintSet& cs) {
  const Index m = basis.cols();
  if (cs.empty()) return {basis.b, Matrix::Identity(m, m), cs};
  if (cs.rows() != basis.rows()) {
    throw InvalidInputError("constraint length does not match basis rows");
  }
  const Index p = cs.count();
  if (p >= m) {
    throw InvalidInputError("constrained basis needs more basis columns (" +
                            std::to_string(m) + ") than constraints (" +
                            std::to_string(p) + ")");
  }
  const QrFactors f = qr(unit_columns(basis.b.transpose() * cs.c()));
  if (f.rank < p) {
    double max_diag = 0.0;
    for (Index i = 0; i < p; ++i) max_diag = std::max(max_diag, f.r(i, i));
    Index dependent = p - 1;
    for (Index i = 0; i < p; ++i) {
      if (f.r(i, i) <= kRankTolerance * max_diag) {
        dependent = i;
        break;
      }
    }
    throw DependentConstraintsError(
        "constraints are dependent on the basis span (constraint " +
            std::to_string(dependent) + ": " + cs.labels()[dependent] + ")",
        static_cast<std::size_t>(dependent));
  }
  const RqFactors rqf = rq(f.q.rightCols(m - p));
  ConstrainedBasis out;
  out.x = rqf.rhat;
  out.bc = basis.b * out.x;
  out.constraints = cs;
  return out;
}

}  // namespace dopsolve

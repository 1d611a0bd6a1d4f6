#include "dopsolve/odesolve.hpp"

#include "dopsolve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace dopsolve {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

OdeSolution finish(const OdeOperator& op, const Vector& g,
                   const ConstraintSet& cs, Vector y, SolveMethod method) {
  OdeSolution s;
  s.residual_norm = (op.l * y - g).norm();
  if (!cs.empty()) {
    s.constraint_residual =
        (cs.c().transpose() * y - cs.d()).lpNorm<Eigen::Infinity>();
  }
  s.rank_ok = check_rank(op, cs);
  s.method = method;
  s.y = std::move(y);
  return s;
}

void require_rhs(const OdeOperator& op, const Vector& g) {
  if (g.size() != op.l.rows()) {
    throw InvalidInputError("right-hand side length " + std::to_string(g.size()) +
                            " does not match grid size " +
                            std::to_string(op.l.rows()));
  }
}

}  // namespace

std::string_view to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::kLse:
      return "lse";
    case SolveMethod::kRegularized:
      return "regularized";
    case SolveMethod::kHomogeneousDirect:
      return "homogeneous-direct";
  }
  return "unknown";
}

Vector sample(const ScalarFunction& f, const NodeGrid& grid, const char* what) {
  Vector out(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.x()(i);
    double v = 0.0;
    try {
      v = f(x);
    } catch (const EvalError& e) {
      throw EvalError(std::string(what) + " failed at node " +
                          std::to_string(i) + " (x = " + fmt(x) +
                          "): " + e.what(),
                      x);
    }
    if (!std::isfinite(v)) {
      throw EvalError(std::string(what) + " is not finite at node " +
                          std::to_string(i) + " (x = " + fmt(x) + ")",
                      x);
    }
    out(i) = v;
  }
  return out;
}

OdeOperator assemble_operator(const DiffOperator& diff,
                              const std::vector<OdeTerm>& terms) {
  const Index n = diff.size();
  std::set<int> seen;
  OdeOperator op{Matrix::Zero(n, n), {}, diff.grid, diff};
  int max_order = 0;
  for (const auto& t : terms) {
    if (t.order < 0) throw InvalidInputError("term order must be >= 0");
    if (!seen.insert(t.order).second) {
      throw InvalidInputError("duplicate term of order " +
                              std::to_string(t.order));
    }
    max_order = std::max(max_order, t.order);
  }
  std::vector<Matrix> powers;  // powers[k] = D^k for k >= 1
  powers.emplace_back();
  for (int k = 1; k <= max_order; ++k) {
    powers.push_back(k == 1 ? diff.d : Matrix(diff.d * powers.back()));
  }
  for (const auto& t : terms) {
    const Vector p = sample(t.coeff, diff.grid,
                            ("coefficient of order " + std::to_string(t.order))
                                .c_str());
    if (t.order == 0) {
      op.l.diagonal() += p;
    } else {
      op.l.noalias() += p.asDiagonal() * powers[t.order];
    }
    op.terms.push_back({t.order, p});
  }
  return op;
}

bool check_rank(const OdeOperator& op, const ConstraintSet& cs) {
  const Index n = op.l.cols();
  Matrix stacked(op.l.rows() + cs.count(), n);
  stacked.topRows(op.l.rows()) = op.l;
  if (!cs.empty()) stacked.bottomRows(cs.count()) = cs.c().transpose();
  for (Index i = 0; i < stacked.rows(); ++i) {
    const double s = stacked.row(i).norm();
    if (s > 0.0) stacked.row(i) /= s;
  }
  return numerical_rank(stacked) == n;
}

OdeSolution solve_lse(const OdeOperator& op, const Vector& g,
                      const ConstraintSet& cs) {
  require_rhs(op, g);
  Vector y = cs.empty() ? pinv_solve(op.l, g)
                        : lse_solve(op.l, g, cs.c(), cs.d());
  return finish(op, g, cs, std::move(y), SolveMethod::kLse);
}

OdeSolution solve_regularized(const OdeOperator& op, const Vector& g,
                              const ConstraintSet& cs, Index r) {
  require_rhs(op, g);
  const Index n = op.l.rows();
  if (r < 1 || r > n) {
    throw InvalidInputError("regularization order r must lie in [1, n]");
  }
  const BasisSet basis = synth_dop(op.grid, r);
  const Matrix lr = op.l * basis.b;
  Vector alpha;
  if (cs.empty()) {
    alpha = pinv_solve(lr, g);
  } else {
    const Matrix cr = basis.b.transpose() * cs.c();
    alpha = lse_solve(lr, g, cr, cs.d());
  }
  return finish(op, g, cs, basis.b * alpha, SolveMethod::kRegularized);
}

OdeSolution solve_homogeneous(const OdeOperator& op, const Vector& g,
                              const ConstrainedBasis& bc) {
  require_rhs(op, g);
  if (bc.bc.rows() != op.l.rows()) {
    throw InvalidInputError("constrained basis does not match the operator grid");
  }
  if (!bc.constraints.homogeneous()) {
    throw InvalidInputError("solve_homogeneous requires homogeneous constraints");
  }
  const Vector alpha = pinv_solve(Matrix(op.l * bc.bc), g);
  return finish(op, g, bc.constraints, bc.bc * alpha,
                SolveMethod::kHomogeneousDirect);
}

Vector rk4_reference(const std::vector<OdeTerm>& terms, const ScalarFunction& g,
                     const std::vector<double>& initial, const NodeGrid& grid,
                     int substeps) {
  if (terms.empty()) throw InvalidInputError("rk4_reference needs terms");
  if (substeps < 1) throw InvalidInputError("substeps must be >= 1");
  int order = 0;
  for (const auto& t : terms) order = std::max(order, t.order);
  if (order < 1) throw InvalidInputError("rk4_reference needs an order >= 1 term");
  if (static_cast<int>(initial.size()) != order) {
    throw InvalidInputError("rk4_reference needs " + std::to_string(order) +
                            " initial values");
  }
  std::vector<const OdeTerm*> by_order(order + 1, nullptr);
  for (const auto& t : terms) by_order[t.order] = &t;

  // y^(order) = (g - sum_{k < order} p_k y^(k)) / p_order
  auto rhs = [&](double x, const Vector& state) {
    const double lead = by_order[order]->coeff(x);
    if (lead == 0.0) {
      throw EvalError("leading coefficient vanishes at x = " + fmt(x), x);
    }
    Vector ds(order);
    for (int k = 0; k + 1 < order; ++k) ds(k) = state(k + 1);
    double acc = g(x);
    for (int k = 0; k < order; ++k) {
      if (by_order[k]) acc -= by_order[k]->coeff(x) * state(k);
    }
    ds(order - 1) = acc / lead;
    return ds;
  };

  const Index n = grid.size();
  Vector out(n);
  Vector state = Eigen::Map<const Vector>(initial.data(), order);
  out(0) = state(0);
  for (Index i = 0; i + 1 < n; ++i) {
    const double x0 = grid.x()(i);
    const double h = (grid.x()(i + 1) - x0) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double x = x0 + s * h;
      const Vector k1 = rhs(x, state);
      const Vector k2 = rhs(x + 0.5 * h, state + 0.5 * h * k1);
      const Vector k3 = rhs(x + 0.5 * h, state + 0.5 * h * k2);
      const Vector k4 = rhs(x + h, state + h * k3);
      state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out(i + 1) = state(0);
  }
  return out;
}

}  // namespace dopsolve

#include "dopsolve/eigsolve.hpp"

#include "dopsolve/errors.hpp"

#include <cmath>

namespace dopsolve {

namespace {

Matrix log_abs(const Matrix& r) {
  return r.cwiseAbs().unaryExpr([](double v) { return std::log10(v); });
}

void check_admissible_count(Index k, Index n, Index p) {
  if (k < 1 || k > n - p) {
    throw InvalidInputError("number of admissible functions must lie in [1, " +
                            std::to_string(n - p) + "] (got " +
                            std::to_string(k) + ")");
  }
}

}  // namespace

double asymmetry(const Matrix& a) {
  const double scale = a.norm();
  const double asym = (a - a.transpose()).norm();
  return scale > 0.0 ? asym / scale : asym;
}

RealEig reduced_eig(const Matrix& la, EigenMethod method) {
  if (method == EigenMethod::kGeneral) return real_eig(la);
  SymEig eig = sym_eig(0.5 * (la + la.transpose()));
  RealEig out{std::move(eig.values), std::move(eig.vectors), 0.0};
  for (Index j = 0; j < out.vectors.cols(); ++j) {
    Index arg = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, j) < 0.0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

Matrix admissible_basis(const NodeGrid& grid, const ConstraintSet& cs, Index k,
                        const std::optional<Vector>& weight) {
  const Index p = cs.count();
  check_admissible_count(k, grid.size(), p);
  BasisSet basis = synth_dop(grid, k + p);
  if (weight) basis = weighted_basis(basis, *weight);
  ConstrainedBasis bc = constrained_basis(basis, cs);
  return bc.bc.leftCols(k);
}

ReducedProblem sl_reduce(const SlProblem& prob, const DiffOperator& diff) {
  const NodeGrid& grid = prob.grid;
  const Index n = grid.size();
  if (diff.size() != n) {
    throw InvalidInputError("differentiating matrix does not match the grid");
  }
  if (!prob.boundary.homogeneous()) {
    throw InvalidInputError("Sturm-Liouville boundary constraints must be homogeneous");
  }
  const Vector p = sample(prob.p, grid, "p(x)");
  const Vector g = sample(prob.g, grid, "g(x)");
  const Vector w = sample(prob.w, grid, "w(x)");
  for (Index i = 0; i < n; ++i) {
    if (!(p(i) > 0.0)) {
      throw InvalidInputError("p(x) must be positive at every node (node " +
                              std::to_string(i) + ")");
    }
    if (!(w(i) > 0.0)) {
      throw InvalidInputError("w(x) must be positive at every node (node " +
                              std::to_string(i) + ")");
    }
  }
  const Index k = prob.num_admissible.value_or(n / 2);
  const bool unit_weight = (w.array() == 1.0).all();

  ReducedProblem out;
  out.ba = admissible_basis(grid, prob.boundary, k,
                            unit_weight ? std::nullopt : std::optional<Vector>(w));
  const Matrix dba = diff.d * out.ba;
  const Matrix pdba = p.asDiagonal() * dba;
  const Matrix dpdba = diff.d * pdba;
  out.la = out.ba.transpose() * dpdba -
           out.ba.transpose() * g.asDiagonal() * out.ba;
  out.asymmetry = asymmetry(out.la);
  out.weight = w;
  return out;
}

EigenSolution sl_solve(const SlProblem& prob, const DiffOperator& diff) {
  ReducedProblem red = sl_reduce(prob, diff);
  // lambda = -mu: eigenpairs of -L_a come out ascending in lambda.
  const RealEig eig = reduced_eig(-red.la, prob.method);
  EigenSolution sol;
  sol.lambdas = eig.values;
  sol.rr_coeffs = eig.vectors;
  sol.functions = red.ba * sol.rr_coeffs;
  sol.spectrum_log = log_abs(sol.rr_coeffs);
  sol.admissible = std::move(red.ba);
  sol.asymmetry = red.asymmetry;
  sol.max_imag = eig.max_imag;
  return sol;
}

EigenSolution generalized_eig_solve(const Matrix& lmat,
                                    const ConstraintSet& constraints,
                                    const BasisSet& basis,
                                    Index num_admissible,
                                    EigenMethod method) {
  const Index n = basis.rows();
  if (lmat.rows() != n || lmat.cols() != n) {
    throw InvalidInputError("operator matrix does not match the basis rows");
  }
  const Index p = constraints.count();
  check_admissible_count(num_admissible, n, p);
  if (basis.cols() < num_admissible + p) {
    throw InvalidInputError("basis needs at least num_admissible + p columns");
  }
  if (!constraints.homogeneous()) {
    throw InvalidInputError("eigenproblem constraints must be homogeneous");
  }
  const ConstrainedBasis bc = constrained_basis(basis, constraints);
  EigenSolution sol;
  sol.admissible = bc.bc.leftCols(num_admissible);
  const Matrix la = sol.admissible.transpose() * (lmat * sol.admissible);
  sol.asymmetry = asymmetry(la);
  const RealEig eig = reduced_eig(la, method);
  sol.lambdas = eig.values;
  sol.rr_coeffs = eig.vectors;
  sol.max_imag = eig.max_imag;
  sol.functions = sol.admissible * sol.rr_coeffs;
  sol.spectrum_log = log_abs(sol.rr_coeffs);
  return sol;
}

}  // namespace dopsolve

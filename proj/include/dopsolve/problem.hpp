#pragma once

// Problem files: JSON documents describing an ODE or eigenproblem, their
// validation, discretization and solution. Built-in benchmark problems are
// compiled in and go through exactly the same path as user files.
//
// {
//   "name": "...",                                   optional
//   "type": "ivp" | "bvp" | "sturm_liouville" | "beam_eigen",
//   "domain": {"start": a, "end": b},
//   "nodes": {"kind": "...", "count": n, "map": "expr in z", "values": [...]},
//   "discretization": {"support_length": 13, "num_basis": r,
//                      "num_admissible": k},
//   "operator": {"terms": [{"order": k, "coeff": "expr in x"}]},
//   "rhs": "expr",                                   ivp / bvp
//   "exact": "expr",                                 optional oracle
//   "sl": {"p": "expr", "g": "expr", "w": "expr"},   sturm_liouville
//   "constraints": [{"kind": "value" | "derivative" | "periodic",
//                    "order": k, "at": x | "start" | "end", "rhs": v,
//                    "smoothness": s}]
// }

#include "dopsolve/eigsolve.hpp"
#include "dopsolve/expr.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dopsolve {

enum class ProblemType { kIvp, kBvp, kSturmLiouville, kBeamEigen };

std::string_view to_string(ProblemType type);

struct NodesSpec {
  GridKind kind = GridKind::kUniform;
  Index count = 0;
  std::optional<expr::Expr> map;
  std::vector<double> values;
};

enum class Anchor { kValue, kStart, kEnd };

struct ConstraintSpec {
  enum class Kind { kValue, kDerivative, kPeriodic };
  Kind kind = Kind::kValue;
  int order = 0;
  Anchor anchor = Anchor::kValue;
  double at = 0.0;  // used when anchor == kValue
  double rhs = 0.0;
  int smoothness = 0;
};

struct TermSpec {
  int order = 0;
  expr::Expr coeff;
};

struct SlSpec {
  expr::Expr p;
  expr::Expr g;
  expr::Expr w;
};

struct ProblemSpec {
  std::string name;
  std::string source;  // file path or "builtin:<name>"
  ProblemType type = ProblemType::kBvp;
  double start = 0.0;
  double end = 1.0;
  NodesSpec nodes;
  Index support_length = 13;
  std::optional<Index> num_basis;
  std::optional<Index> num_admissible;
  std::vector<TermSpec> terms;
  std::optional<expr::Expr> rhs;
  std::optional<expr::Expr> exact;
  std::optional<SlSpec> sl;
  std::vector<ConstraintSpec> constraints;

  bool is_eigen() const {
    return type == ProblemType::kSturmLiouville ||
           type == ProblemType::kBeamEigen;
  }
};

// Validates and converts a JSON document. Syntax errors become ParseError
// with "source:line:column" context, schema violations SchemaError with the
// offending key path (e.g. "/constraints/1/kind").
ProblemSpec parse_problem(std::string_view text, const std::string& source);
ProblemSpec load_problem(const std::filesystem::path& path);

std::vector<std::string> builtin_problem_names();
// JSON text of a built-in problem; InvalidInputError for unknown names.
std::string_view builtin_problem_text(std::string_view name);
ProblemSpec builtin_problem(std::string_view name);

struct Discretization {
  NodeGrid grid;
  DiffOperator diff;
  ConstraintSet constraints;
};

Discretization discretize(const ProblemSpec& spec);

struct SolveReport {
  std::string name;
  Vector x;
  OdeSolution solution;
  std::optional<Vector> exact;
  std::optional<double> max_abs_error;      // vs `exact`
  std::optional<double> rk4_max_abs_error;  // ivp with `exact` only
  double basis_quality = 0.0;               // eps_F of the basis used
  double seconds = 0.0;
};

struct EigReport {
  std::string name;
  Vector x;
  EigenSolution solution;
  double basis_quality = 0.0;  // ||I - B_a^T W B_a||_F
  double seconds = 0.0;
};

SolveReport run_solve(const ProblemSpec& spec);
EigReport run_eig(const ProblemSpec& spec);

}  // namespace dopsolve

#include "dopsolve/basis.hpp"
#include "dopsolve/constraints.hpp"
#include "dopsolve/diffop.hpp"
#include "dopsolve/errors.hpp"
#include "dopsolve/expr.hpp"
#include "dopsolve/linalg.hpp"
#include "dopsolve/problem.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <optional>
#include <string>

namespace py = pybind11;
using namespace dopsolve;

namespace {

NodeGrid grid_from(const Vector& x) { return NodeGrid(x, GridKind::kExplicit); }

// Accepts "builtin:<name>", a path, or JSON text.
ProblemSpec resolve_problem(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return builtin_problem(ref.substr(8));
  const auto first = ref.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && ref[first] == '{') return parse_problem(ref, "<string>");
  return load_problem(ref);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete orthonormal polynomial ODE and eigenproblem solvers";

  auto base = py::register_exception<Error>(m, "DopsolveError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<EvalError>(m, "EvalError", base.ptr());
  py::register_exception<PlacementError>(m, "PlacementError", base.ptr());

  m.def(
      "make_grid",
      [](const std::string& kind, Index n, double a, double b,
         std::optional<std::string> map) {
        std::optional<expr::Expr> e;
        if (map) e = expr::parse(*map);
        return make_grid(grid_kind_from_string(kind), n, a, b, e).x();
      },
      py::arg("kind"), py::arg("n"), py::arg("a") = -1.0, py::arg("b") = 1.0,
      py::arg("map") = py::none());

  m.def(
      "synth_dop",
      [](const Vector& x, Index m) {
        const BasisSet s = synth_dop(grid_from(x), m);
        return py::make_tuple(s.b, s.bdot, s.quality);
      },
      py::arg("x"), py::arg("m"), "Returns (B, Bdot, eps_F).");

  m.def(
      "weighted_basis",
      [](const Vector& x, Index m, const Vector& w) {
        const BasisSet s = weighted_basis(synth_dop(grid_from(x), m), w);
        return py::make_tuple(s.b, s.bdot, s.quality);
      },
      py::arg("x"), py::arg("m"), py::arg("w"));

  m.def("gram_quality",
        [](const Matrix& b, std::optional<Vector> w) { return gram_quality(b, w); },
        py::arg("b"), py::arg("w") = py::none());

  m.def(
      "local_diffmat",
      [](const Vector& x, Index support_length) {
        return local_diffmat(grid_from(x), support_length).d;
      },
      py::arg("x"), py::arg("support_length") = 13);

  m.def(
      "global_diffmat",
      [](const Vector& x, std::optional<Index> m) {
        return global_diffmat(synth_dop(grid_from(x), m.value_or(x.size()))).d;
      },
      py::arg("x"), py::arg("m") = py::none());

  m.def(
      "constrained_basis",
      [](const Vector& x, Index m, const Matrix& c) {
        ConstraintSet cs(x.size());
        for (Index j = 0; j < c.cols(); ++j) cs.add({c.col(j), 0.0, "c" + std::to_string(j)});
        const ConstrainedBasis cb = constrained_basis(synth_dop(grid_from(x), m), cs);
        return py::make_tuple(cb.bc, cb.x);
      },
      py::arg("x"), py::arg("m"), py::arg("c"),
      "Orthonormal basis of degree < m satisfying c.T @ y = 0; returns (Bc, X).");

  m.def("lse_solve", &lse_solve, py::arg("l"), py::arg("g"), py::arg("c"), py::arg("d"));

  m.def(
      "evaluate",
      [](const std::string& source, const Vector& x) {
        const expr::Expr e = expr::parse(source);
        return Vector(x.unaryExpr([&](double v) { return e(v); }));
      },
      py::arg("expression"), py::arg("x"));

  m.def("builtin_problems", &builtin_problem_names);

  m.def(
      "solve",
      [](const std::string& problem) {
        const SolveReport r = run_solve(resolve_problem(problem));
        py::dict out;
        out["name"] = r.name;
        out["x"] = r.x;
        out["y"] = r.solution.y;
        out["residual_norm"] = r.solution.residual_norm;
        out["constraint_residual"] = r.solution.constraint_residual;
        out["basis_quality"] = r.basis_quality;
        out["exact"] = r.exact ? py::cast(*r.exact) : py::none();
        out["max_abs_error"] = r.max_abs_error ? py::cast(*r.max_abs_error) : py::none();
        out["rk4_max_abs_error"] =
            r.rk4_max_abs_error ? py::cast(*r.rk4_max_abs_error) : py::none();
        return out;
      },
      py::arg("problem"), "problem: 'builtin:<name>', a file path, or JSON text.");

  m.def(
      "eig",
      [](const std::string& problem) {
        const EigReport r = run_eig(resolve_problem(problem));
        py::dict out;
        out["name"] = r.name;
        out["x"] = r.x;
        out["lambdas"] = r.solution.lambdas;
        out["functions"] = r.solution.functions;
        out["rr_coeffs"] = r.solution.rr_coeffs;
        out["basis_quality"] = r.basis_quality;
        out["asymmetry"] = r.solution.asymmetry;
        return out;
      },
      py::arg("problem"));
}

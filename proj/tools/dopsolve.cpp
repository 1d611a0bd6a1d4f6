#include "bench.hpp"

#include "dopsolve/csv.hpp"
#include "dopsolve/errors.hpp"
#include "dopsolve/problem.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace dopsolve;

struct NodesArg {
  GridKind kind;
  Index count;
  double a = -1.0;
  double b = 1.0;
};

// kind:count[:a:b]
NodesArg parse_nodes_arg(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 2 && parts.size() != 4) {
    throw InvalidInputError("--nodes expects kind:count[:a:b], got '" + text + "'");
  }
  NodesArg arg{grid_kind_from_string(parts[0]), 0};
  if (arg.kind == GridKind::kMapped || arg.kind == GridKind::kExplicit) {
    throw InvalidInputError("--nodes does not support kind '" + parts[0] +
                            "'; use a problem file");
  }
  try {
    std::size_t used = 0;
    arg.count = std::stoll(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("count");
    if (parts.size() == 4) {
      arg.a = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("a");
      arg.b = std::stod(parts[3], &used);
      if (used != parts[3].size()) throw std::invalid_argument("b");
    }
  } catch (const std::logic_error&) {
    throw InvalidInputError("--nodes: malformed number in '" + text + "'");
  }
  return arg;
}

NodeGrid make_nodes(const NodesArg& arg) {
  return make_grid(arg.kind, arg.count, arg.a, arg.b);
}

ProblemSpec resolve_problem(const std::string& ref) {
  constexpr std::string_view kPrefix = "builtin:";
  if (ref.rfind(kPrefix, 0) == 0) return builtin_problem(ref.substr(kPrefix.size()));
  return load_problem(ref);
}

void print_kv(const char* key, const std::string& value) {
  std::printf("%-22s %s\n", key, value.c_str());
}

void print_kv(const char* key, double value) { print_kv(key, format_double(value)); }

int cmd_solve(const std::string& problem, const std::string& out) {
  const ProblemSpec spec = resolve_problem(problem);
  const SolveReport rep = run_solve(spec);
  std::vector<std::string> header{"x", "y"};
  Matrix cols(rep.x.size(), rep.exact ? 4 : 2);
  cols.col(0) = rep.x;
  cols.col(1) = rep.solution.y;
  if (rep.exact) {
    header.insert(header.end(), {"y_exact", "abs_err"});
    cols.col(2) = *rep.exact;
    cols.col(3) = (rep.solution.y - *rep.exact).cwiseAbs();
  }
  write_csv(out, matrix_table(header, cols));
  print_kv("problem", rep.name);
  print_kv("type", std::string(to_string(spec.type)));
  print_kv("method", std::string(to_string(rep.solution.method)));
  print_kv("solution_csv", out);
  print_kv("residual_norm", rep.solution.residual_norm);
  print_kv("constraint_residual", rep.solution.constraint_residual);
  print_kv("rank_ok", rep.solution.rank_ok ? "true" : "false");
  print_kv("basis_eps_F", rep.basis_quality);
  if (rep.max_abs_error) print_kv("max_abs_err", *rep.max_abs_error);
  if (rep.rk4_max_abs_error) print_kv("rk4_max_abs_err", *rep.rk4_max_abs_error);
  print_kv("seconds", rep.seconds);
  return 0;
}

std::vector<std::string> column_names(const char* prefix, Index k) {
  std::vector<std::string> h;
  for (Index i = 0; i < k; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

std::vector<std::string> indexed(const std::string& first, const char* prefix, Index k) {
  std::vector<std::string> h{first};
  for (auto& name : column_names(prefix, k)) h.push_back(std::move(name));
  return h;
}

int cmd_eig(const std::string& problem, std::optional<std::string> prefix) {
  const ProblemSpec spec = resolve_problem(problem);
  const EigReport rep = run_eig(spec);
  const EigenSolution& sol = rep.solution;
  const Index k = sol.lambdas.size();
  const std::string base = prefix.value_or(spec.name);

  CsvTable lam{{"index", "lambda"}, {}};
  for (Index i = 0; i < k; ++i) {
    lam.add_row({std::to_string(i), format_double(sol.lambdas(i))});
  }
  Matrix fn(rep.x.size(), k + 1);
  fn.col(0) = rep.x;
  fn.rightCols(k) = sol.functions;
  Matrix spec_rows(k, k + 1);
  for (Index i = 0; i < k; ++i) spec_rows(i, 0) = static_cast<double>(i);
  spec_rows.rightCols(k) = sol.spectrum_log;

  write_csv(base + "_lambda.csv", lam);
  write_csv(base + "_functions.csv", matrix_table(indexed("x", "y", k), fn));
  CsvTable st = matrix_table(indexed("coefficient", "s", k), spec_rows);
  for (Index i = 0; i < k; ++i) st.rows[static_cast<std::size_t>(i)][0] = std::to_string(i);
  write_csv(base + "_spectrum.csv", st);

  print_kv("problem", rep.name);
  print_kv("type", std::string(to_string(spec.type)));
  print_kv("lambda_csv", base + "_lambda.csv");
  print_kv("functions_csv", base + "_functions.csv");
  print_kv("spectrum_csv", base + "_spectrum.csv");
  print_kv("num_admissible", std::to_string(k));
  print_kv("basis_eps_F", rep.basis_quality);
  print_kv("asymmetry", sol.asymmetry);
  print_kv("max_imag", sol.max_imag);
  for (Index i = 0; i < std::min<Index>(k, 5); ++i) {
    const std::string key = "lambda_" + std::to_string(i);
    print_kv(key.c_str(), sol.lambdas(i));
  }
  print_kv("seconds", rep.seconds);
  return 0;
}

// Running eps_F of the leading (d + 1)-column blocks.
std::vector<double> leading_quality(const Matrix& b) {
  const Matrix e = Matrix::Identity(b.cols(), b.cols()) - b.transpose() * b;
  std::vector<double> out;
  double acc = 0.0;
  for (Index m = 0; m < b.cols(); ++m) {
    acc += 2.0 * e.col(m).head(m).squaredNorm() + e(m, m) * e(m, m);
    out.push_back(std::sqrt(acc));
  }
  return out;
}

double digits(double eps) {
  return -std::log10(std::max(eps, std::numeric_limits<double>::epsilon()));
}

int cmd_quality(const std::string& nodes, std::optional<Index> max_degree,
                const std::string& out, bool rank) {
  const NodeGrid grid = make_nodes(parse_nodes_arg(nodes));
  const Index n = grid.size();
  const Index top = max_degree.value_or(n - 1);
  if (top < 0 || top >= n) {
    throw InvalidInputError("--max-degree must lie in [0, " + std::to_string(n - 1) + "]");
  }
  if (rank) {
    std::vector<Index> degrees;
    for (Index d = 1; d <= top; ++d) degrees.push_back(d);
    CsvTable t{{"degree", "deficiency"}, {}};
    for (const auto& r : rank_profile(grid, degrees)) {
      t.add_row({std::to_string(r.degree), std::to_string(r.deficiency)});
    }
    write_csv(out, t);
    print_kv("rank_profile_csv", out);
    return 0;
  }
  const Index m = top + 1;
  std::vector<double> dop;
  try {
    dop = leading_quality(synth_dop(grid, m).b);
  } catch (const DegeneracyError& e) {
    const auto ok = static_cast<Index>(e.degree());
    if (ok > 0) dop = leading_quality(synth_dop(grid, ok).b);
  }
  dop.resize(static_cast<std::size_t>(m), std::numeric_limits<double>::quiet_NaN());
  const std::vector<double> gs =
      leading_quality(reference_basis(grid, m, ReferenceBasis::kGramSchmidt));
  const std::vector<double> ch =
      leading_quality(reference_basis(grid, m, ReferenceBasis::kChebyshevRecurrence));
  const std::vector<double> vm =
      leading_quality(reference_basis(grid, m, ReferenceBasis::kVandermonde));
  CsvTable t{{"degree", "eps_dop", "digits_dop", "eps_gram_schmidt",
              "digits_gram_schmidt", "eps_chebyshev", "digits_chebyshev",
              "eps_vandermonde", "digits_vandermonde"},
             {}};
  for (std::size_t d = 0; d < static_cast<std::size_t>(m); ++d) {
    t.add_row({std::to_string(d), format_double(dop[d]), format_double(digits(dop[d])),
               format_double(gs[d]), format_double(digits(gs[d])),
               format_double(ch[d]), format_double(digits(ch[d])),
               format_double(vm[d]), format_double(digits(vm[d]))});
  }
  write_csv(out, t);
  print_kv("quality_csv", out);
  print_kv("eps_dop", dop.back());
  print_kv("eps_gram_schmidt", gs.back());
  print_kv("eps_chebyshev", ch.back());
  print_kv("eps_vandermonde", vm.back());
  return 0;
}

int cmd_diffmat(const std::string& nodes, Index support, const std::string& out) {
  const NodeGrid grid = make_nodes(parse_nodes_arg(nodes));
  const DiffOperator d = local_diffmat(grid, support);
  write_csv(out, matrix_table(column_names("c", d.size()), d.d));
  print_kv("diffmat_csv", out);
  print_kv("size", std::to_string(d.size()));
  print_kv("support_length", std::to_string(d.support_length));
  print_kv("row_sum_max", d.d.rowwise().sum().cwiseAbs().maxCoeff());
  return 0;
}

int cmd_bench(const std::string& which, const std::optional<std::string>& out) {
  const std::vector<cli::BenchRow> rows = cli::run_bench(which);
  bool all_pass = true;
  for (const auto& r : rows) {
    all_pass = all_pass && r.pass;
    std::printf("%-4s %-14s %-40s %s %s %s\n", r.pass ? "PASS" : "FAIL",
                r.bench.c_str(), r.metric.c_str(), format_double(r.value).c_str(),
                r.relation.c_str(), format_double(r.threshold).c_str());
  }
  if (out) write_csv(*out, cli::bench_table(rows));
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete orthonormal polynomial ODE and eigenproblem solver"};
  app.require_subcommand(1);

  std::string problem;
  std::string out;
  std::optional<std::string> out_opt;
  std::string nodes;
  Index support = 13;
  std::optional<Index> max_degree;
  std::string bench = "all";
  bool rank = false;

  auto* solve = app.add_subcommand("solve", "Solve an ivp/bvp problem file (or builtin:<name>)");
  solve->add_option("problem", problem, "Problem JSON path or builtin:<name>")->required();
  solve->add_option("--out", out, "Solution CSV path")->default_val("solution.csv");

  auto* eig = app.add_subcommand("eig", "Solve an eigenproblem file (or builtin:<name>)");
  eig->add_option("problem", problem, "Problem JSON path or builtin:<name>")->required();
  eig->add_option("--out", out_opt, "Output prefix (default: problem name)");

  auto* quality = app.add_subcommand("quality", "Basis orthogonality (eps_F) by degree");
  quality->add_option("--nodes", nodes, "kind:count[:a:b]")->required();
  quality->add_option("--max-degree", max_degree, "Highest degree (default n - 1)");
  quality->add_option("--out", out, "CSV path")->default_val("quality.csv");
  quality->add_flag("--rank-profile", rank,
                    "Write the global differentiating-matrix rank deficiency instead");

  auto* diffmat = app.add_subcommand("diffmat", "Dump a local differentiating matrix");
  diffmat->add_option("--nodes", nodes, "kind:count[:a:b]")->required();
  diffmat->add_option("--support", support, "Odd support length")->default_val(13);
  diffmat->add_option("--out", out, "CSV path")->default_val("diffmat.csv");

  auto* benchc = app.add_subcommand("bench", "Run built-in benchmarks");
  benchc->add_option("--bench", bench, "Benchmark name or 'all'")->default_val("all");
  benchc->add_option("--out", out_opt, "Summary CSV path");

  auto* list = app.add_subcommand("list", "List built-in problems and benchmarks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(problem, out);
    if (*eig) return cmd_eig(problem, out_opt);
    if (*quality) return cmd_quality(nodes, max_degree, out, rank);
    if (*diffmat) return cmd_diffmat(nodes, support, out);
    if (*benchc) return cmd_bench(bench, out_opt);
    if (*list) {
      for (const auto& n : builtin_problem_names()) std::printf("problem %s\n", n.c_str());
      for (const auto& n : cli::bench_names()) std::printf("bench   %s\n", n.c_str());
      return 0;
    }
  } catch (const dopsolve::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

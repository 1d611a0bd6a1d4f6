#include "bench.hpp"

#include "dopsolve/errors.hpp"
#include "dopsolve/problem.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace dopsolve::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BenchRow check(std::string bench, std::string metric, double value,
               std::string relation, double threshold) {
  bool pass = false;
  if (relation == "<") pass = value < threshold;
  if (relation == "<=") pass = value <= threshold;
  if (relation == ">=") pass = value >= threshold;
  if (relation == ">") pass = value > threshold;
  if (relation == "==") pass = value == threshold;
  return {std::move(bench), std::move(metric), value, std::move(relation),
          threshold, pass};
}

constexpr double kDG3[6][6] = {
    {-4.5, 6, -1.5, 0, 0, 0},  {-1.5, 0, 1.5, 0, 0, 0},
    {0, -1.5, 0, 1.5, 0, 0},   {0, 0, -1.5, 0, 1.5, 0},
    {0, 0, 0, -1.5, 0, 1.5},   {0, 0, 0, 1.5, -6, 4.5}};
constexpr double kDC3[6][6] = {
    {-5.2779, 6.0944, -0.8165, 0, 0, 0},
    {-2.4495, 1.633, 0.8165, 0, 0, 0},
    {0, -1.1954, 0.29886, 0.89658, 0, 0},
    {0, 0, -0.89658, -0.29886, 1.1954, 0},
    {0, 0, 0, -0.8165, -1.633, 2.4495},
    {0, 0, 0, 0.8165, -6.0944, 5.2779}};

double printed_deviation(GridKind kind, const double (&ref)[6][6]) {
  const Matrix d = local_diffmat(make_grid(kind, 6, -1.0, 1.0), 3).d;
  double worst = 0.0;
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) worst = std::max(worst, std::abs(d(i, j) - ref[i][j]));
  }
  return worst;
}

void bench_diffmat(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  rows.push_back(check("diffmat", "max_abs_dev_DG3",
                       printed_deviation(GridKind::kGramInterior, kDG3), "<", 5e-4));
  rows.push_back(check("diffmat", "max_abs_dev_DC3",
                       printed_deviation(GridKind::kChebyshev1, kDC3), "<", 5e-4));
  rows.push_back(check("diffmat", "seconds", seconds_since(t0), "<", 1.0));
}

void bench_quality(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  const NodeGrid g100 = make_grid(GridKind::kUniform, 100, -1.0, 1.0);
  rows.push_back(check("quality", "eps_dop_n100", synth_dop(g100, 100).quality, "<", 1e-10));
  const NodeGrid g60 = make_grid(GridKind::kUniform, 60, -1.0, 1.0);
  const double dop = synth_dop(g60, 60).quality;
  const double gs = gram_quality(reference_basis(g60, 60, ReferenceBasis::kGramSchmidt));
  const double vm = gram_quality(reference_basis(g60, 60, ReferenceBasis::kVandermonde));
  rows.push_back(check("quality", "eps_dop_over_gram_schmidt_n60", dop / gs, "<", 1.0));
  rows.push_back(check("quality", "eps_dop_over_vandermonde_n60", dop / vm, "<", 1.0));
  rows.push_back(check("quality", "seconds", seconds_since(t0), "<", 5.0));
}

// Highest degree reached before the deficiency first exceeds 1.
Index last_clean_degree(const NodeGrid& grid) {
  std::vector<Index> degrees;
  for (Index d = 1; d < grid.size(); ++d) degrees.push_back(d);
  Index last = 0;
  for (const auto& r : rank_profile(grid, degrees)) {
    if (r.deficiency > 1) break;
    last = r.degree;
  }
  return last;
}

void bench_rank_profile(std::vector<BenchRow>& rows) {
  const auto small = rank_profile(make_grid(GridKind::kUniform, 10, -1.0, 1.0), {3});
  rows.push_back(check("rank-profile", "deficiency_uniform_n10_deg3",
                       static_cast<double>(small.front().deficiency), "==", 1.0));
  const Index n = 60;
  const double uni = static_cast<double>(
      last_clean_degree(make_grid(GridKind::kUniform, n, -1.0, 1.0)));
  const double cheb = static_cast<double>(
      last_clean_degree(make_grid(GridKind::kChebyshev1, n, -1.0, 1.0)));
  rows.push_back(check("rank-profile", "clean_degree_chebyshev1_minus_uniform_n60",
                       cheb - uni, ">", 0.0));
}

void bench_ivp(std::vector<BenchRow>& rows, const std::string& name) {
  const auto t0 = Clock::now();
  const SolveReport rep = run_solve(builtin_problem(name));
  rows.push_back(check(name, "max_abs_err", *rep.max_abs_error, "<", 1e-6));
  rows.push_back(check(name, "max_abs_err_over_rk4",
                       *rep.max_abs_error / *rep.rk4_max_abs_error, "<", 1.0));
  rows.push_back(check(name, "constraint_residual",
                       rep.solution.constraint_residual, "<", 1e-8));
  rows.push_back(check(name, "seconds", seconds_since(t0), "<", 5.0));
}

Index count_string_hits(const Vector& lambdas, Index limit) {
  Index hits = 0;
  for (Index i = 0; i < std::min(limit, lambdas.size()); ++i) {
    const double k2 = static_cast<double>((i + 1) * (i + 1));
    if (std::abs(lambdas(i) - k2) / k2 < 1e-3) ++hits;
  }
  return hits;
}

void bench_string(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  const EigReport r100 = run_eig(builtin_problem("string100"));
  const EigReport r200 = run_eig(builtin_problem("string200"));
  const Index first28 = count_string_hits(r100.solution.lambdas, 28);
  const auto all100 = static_cast<double>(
      count_string_hits(r100.solution.lambdas, r100.solution.lambdas.size()));
  const auto all200 = static_cast<double>(
      count_string_hits(r200.solution.lambdas, r200.solution.lambdas.size()));
  rows.push_back(check("string", "first28_within_0.1pct_n100",
                       static_cast<double>(first28), ">=", 28.0));
  rows.push_back(check("string", "count_within_0.1pct_n200", all200, ">=", 50.0));
  rows.push_back(check("string", "count_ratio_n200_over_n100",
                       all100 > 0 ? all200 / all100 : 0.0, ">=", 1.8));
  rows.push_back(check("string", "seconds", seconds_since(t0), "<", 10.0));
}

void bench_mathieu(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  const EigReport rep = run_eig(builtin_problem("mathieu"));
  const Vector& l = rep.solution.lambdas;
  Index best = 0;
  for (Index i = 1; i + 1 < l.size(); ++i) {
    if (l(i + 1) - l(i) < l(best + 1) - l(best)) best = i;
  }
  rows.push_back(check("mathieu", "lower_abs_dev", std::abs(l(best) + 21.31489), "<", 1e-3));
  rows.push_back(check("mathieu", "upper_abs_dev", std::abs(l(best + 1) + 21.31486), "<", 1e-3));
  rows.push_back(check("mathieu", "gap", l(best + 1) - l(best), "<", 1e-3));
  rows.push_back(check("mathieu", "gap_positive", l(best + 1) - l(best), ">", 0.0));
  rows.push_back(check("mathieu", "seconds", seconds_since(t0), "<", 60.0));
}

void bench_hydrogen(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  const EigReport rep = run_eig(builtin_problem("hydrogen"));
  const struct {
    Index index;
    double known;
    double tol;
  } refs[] = {{0, -6.25e-2, 1e-9},
              {9, -2.0661157025e-3, 1e-6},
              {17, -2.5757359232e-4, 1e-4},
              {18, 2.8739013100e-5, 1e-3}};
  for (const auto& r : refs) {
    const double rel = std::abs((rep.solution.lambdas(r.index) - r.known) / r.known);
    rows.push_back(check("hydrogen", "rel_err_lambda" + std::to_string(r.index), rel, "<", r.tol));
  }
  rows.push_back(check("hydrogen", "seconds", seconds_since(t0), "<", 60.0));
}

// Root of cos(b) cosh(b) + 1 = 0 near 1.875 by bisection.
double clamped_free_beta1() {
  double lo = 1.5;
  double hi = 2.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = std::cos(mid) * std::cosh(mid) + 1.0;
    if ((std::cos(lo) * std::cosh(lo) + 1.0) * f <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void bench_cantilever(std::vector<BenchRow>& rows) {
  const auto t0 = Clock::now();
  const EigReport rep = run_eig(builtin_problem("cantilever"));
  constexpr double kTable[5] = {0.99640, 0.08434, 0.00763, 0.00317, 0.00041};
  double worst = 0.0;
  for (Index i = 0; i < 5; ++i) {
    worst = std::max(worst, std::abs(std::abs(rep.solution.rr_coeffs(i, 0)) - kTable[i]));
  }
  rows.push_back(check("cantilever", "rr_coeff_max_abs_dev", worst, "<", 5e-3));
  rows.push_back(check("cantilever", "seconds", seconds_since(t0), "<", 60.0));
  const EigReport free = run_eig(builtin_problem("cantilever-free"));
  const double beta = std::pow(free.solution.lambdas(0), 0.25);
  rows.push_back(check("cantilever", "clamped_free_beta1_abs_dev",
                       std::abs(beta - clamped_free_beta1()), "<", 1e-3));
}

struct Entry {
  const char* name;
  std::function<void(std::vector<BenchRow>&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> kEntries{
      {"diffmat", bench_diffmat},
      {"quality", bench_quality},
      {"rank-profile", bench_rank_profile},
      {"ivp1", [](auto& r) { bench_ivp(r, "ivp1"); }},
      {"ivp2", [](auto& r) { bench_ivp(r, "ivp2"); }},
      {"ivp3", [](auto& r) { bench_ivp(r, "ivp3"); }},
      {"string", bench_string},
      {"mathieu", bench_mathieu},
      {"hydrogen", bench_hydrogen},
      {"cantilever", bench_cantilever},
  };
  return kEntries;
}

}  // namespace

std::vector<std::string> bench_names() {
  std::vector<std::string> out;
  for (const auto& e : entries()) out.emplace_back(e.name);
  return out;
}

std::vector<BenchRow> run_bench(const std::string& which) {
  std::vector<BenchRow> rows;
  bool found = false;
  for (const auto& e : entries()) {
    if (which == "all" || which == e.name) {
      e.run(rows);
      found = true;
    }
  }
  if (!found) throw InvalidInputError("unknown benchmark '" + which + "'");
  return rows;
}

CsvTable bench_table(const std::vector<BenchRow>& rows) {
  CsvTable t{{"bench", "metric", "value", "relation", "threshold", "pass"}, {}};
  for (const auto& r : rows) {
    t.add_row({r.bench, r.metric, format_double(r.value), r.relation,
               format_double(r.threshold), r.pass ? "1" : "0"});
  }
  return t;
}

}  // namespace dopsolve::cli

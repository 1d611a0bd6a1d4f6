#include "dopsolve/problem.hpp"

#include "dopsolve/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

namespace dopsolve {

namespace {

using nlohmann::json;

class Validator {
 public:
  explicit Validator(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw SchemaError(source_ + ": " + (path.empty() ? "/" : path) + ": " + msg,
                      path.empty() ? "/" : path);
  }

  void allow_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items()) {
      bool known = false;
      for (const char* k : keys) known = known || item.key() == k;
      if (!known) fail(path + "/" + item.key(), "unknown field");
    }
  }

  const json& require(const json& obj, const std::string& path,
                      const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing required field");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
  }

  long long integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  expr::Expr expression(const json& v, const std::string& path) const {
    // Plain numbers are accepted as constant expressions.
    if (v.is_number()) return expr::parse(format_number(number(v, path)));
    const std::string text = string(v, path);
    try {
      return expr::parse(text);
    } catch (const ParseError& e) {
      throw ParseError(source_ + ": " + path + ": in expression \"" + text +
                           "\": " + e.what(),
                       e.offset(), e.expected());
    }
  }

  const std::string& source() const { return source_; }

 private:
  static std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return "(" + os.str() + ")";
  }

  std::string source_;
};

void line_column(std::string_view text, std::size_t byte, std::size_t& line,
                 std::size_t& column) {
  line = 1;
  column = 1;
  const std::size_t stop = std::min(byte, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

ProblemType problem_type(const Validator& v, const json& j,
                         const std::string& path) {
  static const std::map<std::string, ProblemType> kTypes{
      {"ivp", ProblemType::kIvp},
      {"bvp", ProblemType::kBvp},
      {"sturm_liouville", ProblemType::kSturmLiouville},
      {"beam_eigen", ProblemType::kBeamEigen},
  };
  const std::string s = v.string(j, path);
  const auto it = kTypes.find(s);
  if (it == kTypes.end()) {
    v.fail(path, "unknown problem type '" + s +
                     "' (expected ivp, bvp, sturm_liouville or beam_eigen)");
  }
  return it->second;
}

NodesSpec parse_nodes(const Validator& v, const json& j) {
  const std::string path = "/nodes";
  v.allow_keys(j, path, {"kind", "count", "map", "values"});
  NodesSpec nodes;
  try {
    nodes.kind = grid_kind_from_string(v.string(v.require(j, path, "kind"), path + "/kind"));
  } catch (const GridError& e) {
    v.fail(path + "/kind", e.what());
  }
  if (j.contains("map")) {
    if (nodes.kind != GridKind::kMapped) v.fail(path + "/map", "only valid for kind 'mapped'");
    nodes.map = v.expression(j["map"], path + "/map");
  } else if (nodes.kind == GridKind::kMapped) {
    v.fail(path + "/map", "missing required field for kind 'mapped'");
  }
  if (j.contains("values")) {
    if (nodes.kind != GridKind::kExplicit) v.fail(path + "/values", "only valid for kind 'explicit'");
    const json& vals = j["values"];
    if (!vals.is_array()) v.fail(path + "/values", "expected an array");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      nodes.values.push_back(v.number(vals[i], path + "/values/" + std::to_string(i)));
    }
  } else if (nodes.kind == GridKind::kExplicit) {
    v.fail(path + "/values", "missing required field for kind 'explicit'");
  }
  if (j.contains("count")) {
    nodes.count = static_cast<Index>(v.integer(j["count"], path + "/count"));
  } else if (nodes.kind == GridKind::kExplicit) {
    nodes.count = static_cast<Index>(nodes.values.size());
  } else {
    v.fail(path + "/count", "missing required field");
  }
  if (nodes.count < 2) v.fail(path + "/count", "a grid needs at least 2 nodes");
  if (nodes.kind == GridKind::kExplicit &&
      nodes.count != static_cast<Index>(nodes.values.size())) {
    v.fail(path + "/count", "does not match the number of values");
  }
  return nodes;
}

ConstraintSpec parse_constraint(const Validator& v, const json& j,
                                const std::string& path) {
  v.allow_keys(j, path, {"kind", "order", "at", "rhs", "smoothness"});
  ConstraintSpec c;
  const std::string kind = v.string(v.require(j, path, "kind"), path + "/kind");
  if (kind == "value") {
    c.kind = ConstraintSpec::Kind::kValue;
  } else if (kind == "derivative") {
    c.kind = ConstraintSpec::Kind::kDerivative;
  } else if (kind == "periodic") {
    c.kind = ConstraintSpec::Kind::kPeriodic;
  } else {
    v.fail(path + "/kind", "unknown constraint kind '" + kind +
                               "' (expected value, derivative or periodic)");
  }
  if (c.kind == ConstraintSpec::Kind::kPeriodic) {
    for (const char* key : {"order", "at", "rhs"}) {
      if (j.contains(key)) v.fail(path + "/" + key, "not valid for periodic constraints");
    }
    if (j.contains("smoothness")) {
      const long long s = v.integer(j["smoothness"], path + "/smoothness");
      if (s < 0) v.fail(path + "/smoothness", "must be >= 0");
      c.smoothness = static_cast<int>(s);
    }
    return c;
  }
  if (j.contains("smoothness")) {
    v.fail(path + "/smoothness", "only valid for periodic constraints");
  }
  if (c.kind == ConstraintSpec::Kind::kDerivative) {
    const long long order = v.integer(v.require(j, path, "order"), path + "/order");
    if (order < 1) v.fail(path + "/order", "derivative order must be >= 1");
    c.order = static_cast<int>(order);
  } else if (j.contains("order")) {
    const long long order = v.integer(j["order"], path + "/order");
    if (order != 0) v.fail(path + "/order", "value constraints have order 0");
  }
  const json& at = v.require(j, path, "at");
  if (at.is_string()) {
    const std::string s = at.get<std::string>();
    if (s == "start") {
      c.anchor = Anchor::kStart;
    } else if (s == "end") {
      c.anchor = Anchor::kEnd;
    } else {
      v.fail(path + "/at", "expected a number, \"start\" or \"end\"");
    }
  } else {
    c.at = v.number(at, path + "/at");
  }
  if (j.contains("rhs")) c.rhs = v.number(j["rhs"], path + "/rhs");
  return c;
}

std::vector<TermSpec> parse_operator(const Validator& v, const json& j) {
  const std::string path = "/operator";
  v.allow_keys(j, path, {"terms"});
  const json& terms = v.require(j, path, "terms");
  if (!terms.is_array() || terms.empty()) {
    v.fail(path + "/terms", "expected a non-empty array");
  }
  std::vector<TermSpec> out;
  std::set<long long> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + "/terms/" + std::to_string(i);
    v.allow_keys(terms[i], tp, {"order", "coeff"});
    const long long order = v.integer(v.require(terms[i], tp, "order"), tp + "/order");
    if (order < 0) v.fail(tp + "/order", "must be >= 0");
    if (!seen.insert(order).second) v.fail(tp + "/order", "duplicate order");
    out.push_back({static_cast<int>(order),
                   v.expression(v.require(terms[i], tp, "coeff"), tp + "/coeff")});
  }
  return out;
}

void forbid(const Validator& v, const json& root, const char* key,
            ProblemType type) {
  if (root.contains(key)) {
    v.fail(std::string("/") + key,
           "not valid for problem type '" + std::string(to_string(type)) + "'");
  }
}

std::vector<OdeTerm> ode_terms(const std::vector<TermSpec>& terms) {
  std::vector<OdeTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.order, t.coeff});
  return out;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// y, y', ..., y^(k-1) at the first node when the constraints are exactly a
// complete set of initial conditions there.
std::optional<std::vector<double>> initial_values(const ProblemSpec& spec,
                                                  int order) {
  std::vector<std::optional<double>> vals(static_cast<std::size_t>(order));
  for (const auto& c : spec.constraints) {
    if (c.kind == ConstraintSpec::Kind::kPeriodic) return std::nullopt;
    const int k = c.kind == ConstraintSpec::Kind::kValue ? 0 : c.order;
    if (k >= order || vals[static_cast<std::size_t>(k)]) return std::nullopt;
    vals[static_cast<std::size_t>(k)] = c.rhs;
  }
  std::vector<double> out;
  for (const auto& v : vals) {
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::string_view to_string(ProblemType type) {
  switch (type) {
    case ProblemType::kIvp:
      return "ivp";
    case ProblemType::kBvp:
      return "bvp";
    case ProblemType::kSturmLiouville:
      return "sturm_liouville";
    case ProblemType::kBeamEigen:
      return "beam_eigen";
  }
  return "unknown";
}

ProblemSpec parse_problem(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    line_column(text, byte, line, column);
    throw ParseError(source + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": invalid JSON: " + e.what(),
                     byte, {});
  }
  const Validator v(source);
  v.allow_keys(root, "", {"name", "type", "domain", "nodes", "discretization",
                          "operator", "rhs", "exact", "sl", "constraints"});

  ProblemSpec spec;
  spec.source = source;
  spec.type = problem_type(v, v.require(root, "", "type"), "/type");
  if (root.contains("name")) spec.name = v.string(root["name"], "/name");

  const json& domain = v.require(root, "", "domain");
  v.allow_keys(domain, "/domain", {"start", "end"});
  spec.start = v.number(v.require(domain, "/domain", "start"), "/domain/start");
  spec.end = v.number(v.require(domain, "/domain", "end"), "/domain/end");
  if (!(spec.start < spec.end)) v.fail("/domain", "start must be less than end");

  spec.nodes = parse_nodes(v, v.require(root, "", "nodes"));

  if (root.contains("discretization")) {
    const json& d = root["discretization"];
    const std::string path = "/discretization";
    v.allow_keys(d, path, {"support_length", "num_basis", "num_admissible"});
    if (d.contains("support_length")) {
      const long long ls = v.integer(d["support_length"], path + "/support_length");
      if (ls < 3 || ls % 2 == 0) {
        v.fail(path + "/support_length", "must be an odd integer >= 3");
      }
      spec.support_length = static_cast<Index>(ls);
    }
    if (d.contains("num_basis")) {
      if (spec.is_eigen()) v.fail(path + "/num_basis", "only valid for ivp and bvp problems");
      const long long r = v.integer(d["num_basis"], path + "/num_basis");
      if (r < 1) v.fail(path + "/num_basis", "must be >= 1");
      spec.num_basis = static_cast<Index>(r);
    }
    if (d.contains("num_admissible")) {
      if (!spec.is_eigen()) {
        v.fail(path + "/num_admissible", "only valid for eigenproblems");
      }
      const long long k = v.integer(d["num_admissible"], path + "/num_admissible");
      if (k < 1) v.fail(path + "/num_admissible", "must be >= 1");
      spec.num_admissible = static_cast<Index>(k);
    }
  }

  switch (spec.type) {
    case ProblemType::kIvp:
    case ProblemType::kBvp:
      forbid(v, root, "sl", spec.type);
      spec.terms = parse_operator(v, v.require(root, "", "operator"));
      spec.rhs = v.expression(v.require(root, "", "rhs"), "/rhs");
      if (root.contains("exact")) spec.exact = v.expression(root["exact"], "/exact");
      break;
    case ProblemType::kSturmLiouville: {
      for (const char* key : {"operator", "rhs", "exact"}) forbid(v, root, key, spec.type);
      const json& sl = v.require(root, "", "sl");
      v.allow_keys(sl, "/sl", {"p", "g", "w"});
      spec.sl = SlSpec{v.expression(v.require(sl, "/sl", "p"), "/sl/p"),
                       v.expression(v.require(sl, "/sl", "g"), "/sl/g"),
                       v.expression(v.require(sl, "/sl", "w"), "/sl/w")};
      break;
    }
    case ProblemType::kBeamEigen:
      for (const char* key : {"sl", "rhs", "exact"}) forbid(v, root, key, spec.type);
      spec.terms = parse_operator(v, v.require(root, "", "operator"));
      break;
  }

  if (root.contains("constraints")) {
    const json& cs = root["constraints"];
    if (!cs.is_array()) v.fail("/constraints", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      spec.constraints.push_back(
          parse_constraint(v, cs[i], "/constraints/" + std::to_string(i)));
    }
  }
  if (spec.type == ProblemType::kIvp) {
    for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
      const auto& c = spec.constraints[i];
      const bool at_start =
          c.anchor == Anchor::kStart ||
          (c.anchor == Anchor::kValue && c.at == spec.start);
      if (c.kind == ConstraintSpec::Kind::kPeriodic || !at_start) {
        v.fail("/constraints/" + std::to_string(i) +
                   (c.kind == ConstraintSpec::Kind::kPeriodic ? "/kind" : "/at"),
               "initial value problems constrain the start of the domain only");
      }
    }
  }
  if (spec.is_eigen()) {
    for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
      if (spec.constraints[i].rhs != 0.0) {
        v.fail("/constraints/" + std::to_string(i) + "/rhs",
               "eigenproblem constraints must be homogeneous");
      }
    }
  }
  if (spec.name.empty()) spec.name = std::filesystem::path(source).stem().string();
  return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.string());
}

ProblemSpec builtin_problem(std::string_view name) {
  return parse_problem(builtin_problem_text(name),
                       "builtin:" + std::string(name));
}

Discretization discretize(const ProblemSpec& spec) {
  const NodesSpec& ns = spec.nodes;
  NodeGrid grid =
      ns.kind == GridKind::kExplicit
          ? NodeGrid(Eigen::Map<const Vector>(ns.values.data(),
                                              static_cast<Index>(ns.values.size())),
                     GridKind::kExplicit)
          : make_grid(ns.kind, ns.count, spec.start, spec.end, ns.map);
  const double tol = 1e-12 * (spec.end - spec.start);
  if (grid.front() < spec.start - tol || grid.back() > spec.end + tol) {
    throw GridError("nodes leave the domain [" + std::to_string(spec.start) +
                    ", " + std::to_string(spec.end) + "]");
  }
  DiffOperator diff = local_diffmat(grid, spec.support_length);
  ConstraintSet cs(grid.size());
  for (const auto& c : spec.constraints) {
    const double at = c.anchor == Anchor::kStart ? grid.front()
                      : c.anchor == Anchor::kEnd ? grid.back()
                                                 : c.at;
    switch (c.kind) {
      case ConstraintSpec::Kind::kValue:
        cs.add(value_constraint(grid, at, c.rhs));
        break;
      case ConstraintSpec::Kind::kDerivative:
        cs.add(derivative_constraint(diff, c.order, at, c.rhs));
        break;
      case ConstraintSpec::Kind::kPeriodic:
        cs.append(periodic_constraints(diff, c.smoothness));
        break;
    }
  }
  return {std::move(grid), std::move(diff), std::move(cs)};
}

SolveReport run_solve(const ProblemSpec& spec) {
  if (spec.is_eigen()) {
    throw InvalidInputError("'" + spec.name + "' is an eigenproblem; use eig");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Discretization disc = discretize(spec);
  const std::vector<OdeTerm> terms = ode_terms(spec.terms);
  const OdeOperator op = assemble_operator(disc.diff, terms);
  const Vector g = sample(*spec.rhs, disc.grid, "rhs");

  SolveReport rep;
  rep.name = spec.name;
  rep.x = disc.grid.x();
  if (spec.num_basis) {
    rep.solution = solve_regularized(op, g, disc.constraints, *spec.num_basis);
    rep.basis_quality = synth_dop(disc.grid, *spec.num_basis).quality;
  } else {
    rep.solution = solve_lse(op, g, disc.constraints);
    rep.basis_quality = synth_dop(disc.grid, disc.grid.size()).quality;
  }
  if (spec.exact) {
    rep.exact = sample(*spec.exact, disc.grid, "exact");
    rep.max_abs_error = (rep.solution.y - *rep.exact).cwiseAbs().maxCoeff();
    if (spec.type == ProblemType::kIvp) {
      int order = 0;
      for (const auto& t : terms) order = std::max(order, t.order);
      if (const auto init = initial_values(spec, order)) {
        const Vector yrk =
            rk4_reference(terms, *spec.rhs, *init, disc.grid);
        rep.rk4_max_abs_error = (yrk - *rep.exact).cwiseAbs().maxCoeff();
      }
    }
  }
  rep.seconds = elapsed(t0);
  return rep;
}

EigReport run_eig(const ProblemSpec& spec) {
  if (!spec.is_eigen()) {
    throw InvalidInputError("'" + spec.name + "' is not an eigenproblem; use solve");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Discretization disc = discretize(spec);
  const Index n = disc.grid.size();
  EigReport rep;
  rep.name = spec.name;
  rep.x = disc.grid.x();
  if (spec.type == ProblemType::kSturmLiouville) {
    SlProblem prob{spec.sl->p, spec.sl->g, spec.sl->w, disc.grid,
                   disc.constraints, spec.num_admissible};
    rep.solution = sl_solve(prob, disc.diff);
    const Vector w = sample(spec.sl->w, disc.grid, "w(x)");
    rep.basis_quality = gram_quality(rep.solution.admissible, w);
  } else {
    const OdeOperator op = assemble_operator(disc.diff, ode_terms(spec.terms));
    const Index k = spec.num_admissible.value_or(n / 2);
    const Index p = disc.constraints.count();
    if (k + p > n) {
      throw InvalidInputError("num_admissible + constraints exceeds the node count");
    }
    const BasisSet basis = synth_dop(disc.grid, k + p);
    rep.solution = generalized_eig_solve(op.l, disc.constraints, basis, k);
    rep.basis_quality = gram_quality(rep.solution.admissible);
  }
  rep.seconds = elapsed(t0);
  return rep;
}

}  // namespace dopsolve

#include "dopsolve/expr.hpp"

#include "dopsolve/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <variant>
#include <vector>

namespace dopsolve::expr {

struct Number {
  double value;
};
struct Variable {
  char name;  // 'x' or 'z'
};
struct Pi {};
struct Negate {
  Expr operand;
};
struct Binary {
  char op;  // + - * / ^
  Expr lhs;
  Expr rhs;
};
struct Call {
  Func func;
  Expr arg;
};

struct Node {
  std::variant<Number, Variable, Pi, Negate, Binary, Call> v;
};

namespace {

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncName, 10> kFunctions{{
    {"sin", Func::kSin},
    {"cos", Func::kCos},
    {"tan", Func::kTan},
    {"exp", Func::kExp},
    {"log", Func::kLog},
    {"sqrt", Func::kSqrt},
    {"abs", Func::kAbs},
    {"sinh", Func::kSinh},
    {"cosh", Func::kCosh},
    {"tanh", Func::kTanh},
}};

std::string_view func_name(Func f) {
  for (const auto& entry : kFunctions) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

template <typename T>
Expr make(T node) {
  return Expr(std::make_shared<const Node>(Node{std::move(node)}));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      fail({"operator", "end of input"});
    }
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "syntax error at offset " + std::to_string(pos_) +
                      ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
      msg += expected[i];
    }
    if (pos_ < src_.size()) {
      msg += ", found '";
      msg += src_[pos_];
      msg += "'";
    } else {
      msg += ", found end of input";
    }
    throw ParseError(msg, pos_, std::move(expected));
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth_ > kMaxDepth) {
        throw ParseError("expression nested too deeply", p.pos_, {});
      }
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  Expr parse_expr() {
    DepthGuard guard(*this);
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Binary{'+', lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(Binary{'-', lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Binary{'*', lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Binary{'/', lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than '^': -x^2 == -(x^2).
  Expr parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make(Negate{parse_unary()});
    return parse_power();
  }

  // Right-associative; the exponent may carry its own sign (2^-1).
  Expr parse_power() {
    DepthGuard guard(*this);
    Expr base = parse_primary();
    if (accept('^')) {
      return make(Binary{'^', base, parse_unary()});
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"number", "identifier", "'('", "'-'"});
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view ident = src_.substr(start, pos_ - start);
      if (ident == "x" || ident == "z") return make(Variable{ident[0]});
      if (ident == "pi") return make(Pi{});
      for (const auto& entry : kFunctions) {
        if (entry.name == ident) {
          if (!accept('(')) fail({"'('"});
          Expr arg = parse_expr();
          if (!accept(')')) fail({"')'"});
          return make(Call{entry.func, arg});
        }
      }
      throw ParseError("unknown identifier '" + std::string(ident) +
                           "' at offset " + std::to_string(start),
                       start, {"x", "z", "pi", "function name"});
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      if (pos_ >= src_.size() ||
          !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        fail({"digit"});
      }
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ >= src_.size() ||
          !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        fail({"exponent digit"});
      }
      digits();
    }
    double value = 0.0;
    const auto res =
        std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      throw ParseError("number out of range at offset " +
                           std::to_string(start),
                       start, {"finite number"});
    }
    return make(Number{value});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

[[noreturn]] void domain_error(const std::string& what, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  throw EvalError(what + " at x = " + buf, x);
}

double eval_node(const Node& node, double x) {
  return std::visit(
      [x](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, Pi>) {
          return std::numbers::pi;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(n.operand.root(), x);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double a = eval_node(n.lhs.root(), x);
          const double b = eval_node(n.rhs.root(), x);
          switch (n.op) {
            case '+':
              return a + b;
            case '-':
              return a - b;
            case '*':
              return a * b;
            case '/':
              if (b == 0.0) domain_error("division by zero", x);
              return a / b;
            default: {
              const double r = std::pow(a, b);
              if (std::isnan(r)) domain_error("invalid power", x);
              if (std::isinf(r) && std::isfinite(a) && std::isfinite(b)) {
                domain_error("power overflow or pole", x);
              }
              return r;
            }
          }
        } else {
          const double a = eval_node(n.arg.root(), x);
          switch (n.func) {
            case Func::kSin:
              return std::sin(a);
            case Func::kCos:
              return std::cos(a);
            case Func::kTan:
              return std::tan(a);
            case Func::kExp:
              return std::exp(a);
            case Func::kLog:
              if (!(a > 0.0)) domain_error("log of non-positive value", x);
              return std::log(a);
            case Func::kSqrt:
              if (a < 0.0) domain_error("sqrt of negative value", x);
              return std::sqrt(a);
            case Func::kAbs:
              return std::abs(a);
            case Func::kSinh:
              return std::sinh(a);
            case Func::kCosh:
              return std::cosh(a);
            case Func::kTanh:
              return std::tanh(a);
          }
          return 0.0;
        }
      },
      node.v);
}

bool equal_nodes(const Node& a, const Node& b);

bool equal_exprs(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return equal_nodes(a.root(), b.root());
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&b](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const auto& m = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, Number>) {
          return n.value == m.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.name == m.name;
        } else if constexpr (std::is_same_v<T, Pi>) {
          return true;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return equal_exprs(n.operand, m.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return n.op == m.op && equal_exprs(n.lhs, m.lhs) &&
                 equal_exprs(n.rhs, m.rhs);
        } else {
          return n.func == m.func && equal_exprs(n.arg, m.arg);
        }
      },
      a.v);
}

void print_node(const Node& node, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", n.value);
          out += buf;
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Pi>) {
          out += "pi";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print_node(n.operand.root(), out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          out += "(";
          print_node(n.lhs.root(), out);
          out += n.op;
          print_node(n.rhs.root(), out);
          out += ")";
        } else {
          out += func_name(n.func);
          out += "(";
          print_node(n.arg.root(), out);
          out += ")";
        }
      },
      node.v);
}

}  // namespace

double Expr::operator()(double value) const { return eval(*this, value); }

bool operator==(const Expr& a, const Expr& b) { return equal_exprs(a, b); }

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string print(const Expr& e) {
  std::string out;
  if (!e.empty()) print_node(e.root(), out);
  return out;
}

double eval(const Expr& e, double x) {
  if (e.empty()) throw InvalidInputError("evaluating an empty expression");
  const double r = eval_node(e.root(), x);
  if (std::isnan(r)) domain_error("expression evaluated to NaN", x);
  return r;
}

}  // namespace dopsolve::expr

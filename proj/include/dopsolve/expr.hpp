#pragma once

// Scalar expressions of one variable, used for coefficient functions,
// right-hand sides and node maps in problem files.
//
// Grammar (whitespace insignificant):
//   expr    := term (("+" | "-") term)*
//   term    := factor (("*" | "/") factor)*
//   factor  := unary ("^" factor)?
//   unary   := "-" unary | primary
//   primary := number | "x" | "z" | "pi" | ident "(" expr ")" | "(" expr ")"
//
// "^" is right-associative and binds tighter than unary minus, so "-x^2" is
// -(x^2). There is no implicit multiplication.

#include <memory>
#include <string>
#include <string_view>

namespace dopsolve::expr {

enum class Func { kSin, kCos, kTan, kExp, kLog, kSqrt, kAbs, kSinh, kCosh, kTanh };

struct Node;

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  // Evaluates with every variable (x or z) bound to `value`.
  double operator()(double value) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view source);

// Fully parenthesized text; parse(print(e)) == e structurally.
std::string print(const Expr& e);

double eval(const Expr& e, double x);

}  // namespace dopsolve::expr

#pragma once

// Coefficient expressions: a tiny arithmetic language over the variables
// x and t, used for speeds a_j(x,t), dampings b_j(x,t), time-dependent
// boundary coefficients q_jk(t) and initial data phi_j(x).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INTEGER)*
//   primary := NUMBER | 'x' | 't' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | exp | abs

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fts {

enum class Variable : std::uint8_t { x, t };
enum class Function : std::uint8_t { sin, cos, exp, abs };
enum class BinaryOp : std::uint8_t { add, sub, mul, div };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind : std::uint8_t { number, variable, negate, binary, power, call };

  Kind kind = Kind::number;
  double value = 0.0;      // number
  Variable var{};          // variable
  BinaryOp op{};           // binary
  Function func{};         // call
  int exponent = 0;        // power
  ExprNodePtr lhs;         // operand of negate/power/call, left of binary
  ExprNodePtr rhs;         // right of binary
};

namespace detail {
struct Instr;
}

// Immutable expression. Copies share the tree; evaluation is thread-safe.
class Expr {
public:
  Expr();  // the literal 0

  static Expr parse(std::string_view source);
  static Expr constant(double v);
  static Expr from_tree(ExprNodePtr root);

  // Throws EvalError on division by zero (including negative powers of 0).
  double eval(double x, double t) const;

  std::string to_string() const;

  bool uses_x() const noexcept { return uses_x_; }
  bool uses_t() const noexcept { return uses_t_; }
  bool is_constant() const noexcept { return !uses_x_ && !uses_t_; }

  // Value when the expression has no variables and evaluates cleanly.
  std::optional<double> constant_value() const noexcept { return constant_; }

  const ExprNode& root() const noexcept { return *root_; }

private:
  explicit Expr(ExprNodePtr root);

  ExprNodePtr root_;
  std::shared_ptr<const std::vector<detail::Instr>> code_;
  std::size_t stack_depth_ = 0;
  bool uses_x_ = false;
  bool uses_t_ = false;
  std::optional<double> constant_;
};

Expr parse_expr(std::string_view source);
double eval_expr(const Expr& e, double x, double t);
std::string pretty_print(const Expr& e);

} // namespace fts

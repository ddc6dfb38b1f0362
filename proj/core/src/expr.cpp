#include "fts/expr.hpp"

#include "fts/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace fts {

namespace detail {

enum class OpCode : std::uint8_t {
  push, load_x, load_t, neg, add, sub, mul, div, pow, sin, cos, exp, abs
};

struct Instr {
  OpCode op;
  int exponent = 0;
  double value = 0.0;
};

} // namespace detail

namespace {

using detail::Instr;
using detail::OpCode;
using Kind = ExprNode::Kind;

ExprNodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::number;
  n->value = v;
  return n;
}

ExprNodePtr make_variable(Variable v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::variable;
  n->var = v;
  return n;
}

ExprNodePtr make_unary(Kind kind, ExprNodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(operand);
  return n;
}

ExprNodePtr make_binary(BinaryOp op, ExprNodePtr l, ExprNodePtr r) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::binary;
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprNodePtr parse() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("expected operator or end of input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    std::string found = pos_ >= src_.size()
                            ? "end of input"
                            : "'" + std::string(1, src_[pos_]) + "'";
    throw ParseError(pos_, "syntax error: " + what + ", found " + found);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  ExprNodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_unary() {
    if (accept('-')) return make_unary(Kind::negate, parse_unary());
    return parse_power();
  }

  ExprNodePtr parse_power() {
    auto base = parse_primary();
    while (accept('^')) {
      skip_ws();
      bool negative = false;
      if (pos_ < src_.size() && src_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int k = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, k);
      if (ec != std::errc{} || ptr != src_.data() + pos_) {
        pos_ = start;
        fail("expected integer exponent in int range");
      }
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::power;
      n->exponent = negative ? -k : k;
      n->lhs = std::move(base);
      base = std::move(n);
    }
    return base;
  }

  ExprNodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected number, variable, function or '('");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("expected number, variable, function or '('");
  }

  ExprNodePtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("expected digits in number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("expected exponent digits");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("number out of range");
    }
    return make_number(v);
  }

  ExprNodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make_variable(Variable::x);
    if (name == "t") return make_variable(Variable::t);

    Function f{};
    if (name == "sin") f = Function::sin;
    else if (name == "cos") f = Function::cos;
    else if (name == "exp") f = Function::exp;
    else if (name == "abs") f = Function::abs;
    else throw ParseError(start, "unknown identifier '" + std::string(name) + "'");

    expect('(');
    auto arg = parse_sum();
    expect(')');
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

struct Compiled {
  std::vector<Instr> code;
  std::size_t max_depth = 0;
  bool uses_x = false;
  bool uses_t = false;
};

// Post-order emission; returns the stack depth needed by the subtree.
std::size_t emit(const ExprNode& n, Compiled& out) {
  switch (n.kind) {
  case Kind::number:
    out.code.push_back({OpCode::push, 0, n.value});
    return 1;
  case Kind::variable:
    if (n.var == Variable::x) {
      out.uses_x = true;
      out.code.push_back({OpCode::load_x});
    } else {
      out.uses_t = true;
      out.code.push_back({OpCode::load_t});
    }
    return 1;
  case Kind::negate: {
    auto d = emit(*n.lhs, out);
    out.code.push_back({OpCode::neg});
    return d;
  }
  case Kind::power: {
    auto d = emit(*n.lhs, out);
    out.code.push_back({OpCode::pow, n.exponent});
    return d;
  }
  case Kind::call: {
    auto d = emit(*n.lhs, out);
    static constexpr std::array ops{OpCode::sin, OpCode::cos, OpCode::exp, OpCode::abs};
    out.code.push_back({ops[static_cast<std::size_t>(n.func)]});
    return d;
  }
  case Kind::binary: {
    auto dl = emit(*n.lhs, out);
    auto dr = emit(*n.rhs, out);
    static constexpr std::array ops{OpCode::add, OpCode::sub, OpCode::mul, OpCode::div};
    out.code.push_back({ops[static_cast<std::size_t>(n.op)]});
    return std::max(dl, dr + 1);
  }
  }
  return 0;
}

double int_power(double base, int k) {
  unsigned long long e = k < 0 ? -static_cast<long long>(k) : k;
  double result = 1.0;
  double b = base;
  while (e != 0) {
    if (e & 1ULL) result *= b;
    b *= b;
    e >>= 1;
  }
  if (k < 0) {
    if (result == 0.0) throw EvalError("division by zero in negative power");
    result = 1.0 / result;
  }
  return result;
}

double run(const std::vector<Instr>& code, double* stack, double x, double t) {
  std::size_t sp = 0;
  for (const auto& in : code) {
    switch (in.op) {
    case OpCode::push: stack[sp++] = in.value; break;
    case OpCode::load_x: stack[sp++] = x; break;
    case OpCode::load_t: stack[sp++] = t; break;
    case OpCode::neg: stack[sp - 1] = -stack[sp - 1]; break;
    case OpCode::add: --sp; stack[sp - 1] += stack[sp]; break;
    case OpCode::sub: --sp; stack[sp - 1] -= stack[sp]; break;
    case OpCode::mul: --sp; stack[sp - 1] *= stack[sp]; break;
    case OpCode::div:
      --sp;
      if (stack[sp] == 0.0) throw EvalError("division by zero");
      stack[sp - 1] /= stack[sp];
      break;
    case OpCode::pow: stack[sp - 1] = int_power(stack[sp - 1], in.exponent); break;
    case OpCode::sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
    case OpCode::cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
    case OpCode::exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
    case OpCode::abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
    }
  }
  return stack[0];
}

// Printing precedence levels.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kAtom = 5;

int precedence(const ExprNode& n) {
  switch (n.kind) {
  case Kind::number: return std::signbit(n.value) ? kUnary : kAtom;
  case Kind::variable:
  case Kind::call: return kAtom;
  case Kind::negate: return kUnary;
  case Kind::power: return 4;
  case Kind::binary:
    return (n.op == BinaryOp::add || n.op == BinaryOp::sub) ? kSum : kProduct;
  }
  return kAtom;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void print(const ExprNode& n, std::string& out) {
  auto child = [&out](const ExprNode& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
  case Kind::number: out += format_number(n.value); return;
  case Kind::variable: out += (n.var == Variable::x ? 'x' : 't'); return;
  case Kind::negate:
    out += '-';
    child(*n.lhs, precedence(*n.lhs) < kUnary);
    return;
  case Kind::power:
    child(*n.lhs, precedence(*n.lhs) < kAtom);
    out += '^';
    out += std::to_string(n.exponent);
    return;
  case Kind::call: {
    static constexpr std::array names{"sin", "cos", "exp", "abs"};
    out += names[static_cast<std::size_t>(n.func)];
    child(*n.lhs, true);
    return;
  }
  case Kind::binary: {
    static constexpr std::array symbols{" + ", " - ", " * ", " / "};
    int p = precedence(n);
    child(*n.lhs, precedence(*n.lhs) < p);
    out += symbols[static_cast<std::size_t>(n.op)];
    child(*n.rhs, precedence(*n.rhs) <= p);
    return;
  }
  }
}

} // namespace

Expr::Expr() : Expr(make_number(0.0)) {}

Expr::Expr(ExprNodePtr root) : root_(std::move(root)) {
  Compiled c;
  c.max_depth = emit(*root_, c);
  uses_x_ = c.uses_x;
  uses_t_ = c.uses_t;
  stack_depth_ = c.max_depth;
  code_ = std::make_shared<const std::vector<Instr>>(std::move(c.code));
  if (!uses_x_ && !uses_t_) {
    try {
      constant_ = eval(0.0, 0.0);
    } catch (const EvalError&) {
      constant_.reset();
    }
  }
}

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).parse()); }

Expr Expr::constant(double v) { return Expr(make_number(v)); }

Expr Expr::from_tree(ExprNodePtr root) {
  if (!root) throw Error("null expression tree");
  return Expr(std::move(root));
}

double Expr::eval(double x, double t) const {
  constexpr std::size_t kInline = 32;
  if (stack_depth_ <= kInline) {
    std::array<double, kInline> stack;
    return run(*code_, stack.data(), x, t);
  }
  std::vector<double> stack(stack_depth_);
  return run(*code_, stack.data(), x, t);
}

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expr parse_expr(std::string_view source) { return Expr::parse(source); }

double eval_expr(const Expr& e, double x, double t) { return e.eval(x, t); }

std::string pretty_print(const Expr& e) { return e.to_string(); }

} // namespace fts

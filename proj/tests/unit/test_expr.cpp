#include "fts/errors.hpp"
#include "fts/expr.hpp"

#include <doctest.h>

#include <bit>
#include <random>

using fts::Expr;
using fts::ExprNode;

TEST_SUITE("expr") {

TEST_CASE("literal and structure") {
  Expr one = fts::parse_expr("1");
  CHECK(one.root().kind == ExprNode::Kind::number);
  CHECK(one.root().value == 1.0);
  CHECK(one.constant_value() == 1.0);

  Expr e = fts::parse_expr("1 + 0.1*sin(t)");
  const ExprNode& r = e.root();
  REQUIRE(r.kind == ExprNode::Kind::binary);
  CHECK(r.op == fts::BinaryOp::add);
  CHECK(r.lhs->value == 1.0);
  REQUIRE(r.rhs->kind == ExprNode::Kind::binary);
  CHECK(r.rhs->op == fts::BinaryOp::mul);
  CHECK(r.rhs->lhs->value == 0.1);
  CHECK(r.rhs->rhs->kind == ExprNode::Kind::call);
  CHECK(r.rhs->rhs->func == fts::Function::sin);
  CHECK(r.rhs->rhs->lhs->var == fts::Variable::t);
  CHECK(e.uses_t());
  CHECK_FALSE(e.uses_x());
}

TEST_CASE("evaluation") {
  CHECK(fts::eval_expr(fts::parse_expr("x*(1-x)"), 0.5, 0.0) == 0.25);
  CHECK(fts::eval_expr(fts::parse_expr("exp(0)"), 0.3, 7.0) == 1.0);
  CHECK(fts::parse_expr("2^3^2").eval(0, 0) == 64.0);  // left associative
  CHECK(fts::parse_expr("-2^2").eval(0, 0) == -4.0);   // power binds tighter
  CHECK(fts::parse_expr("x^-2").eval(2, 0) == 0.25);
  CHECK(fts::parse_expr("10 - 4 - 3").eval(0, 0) == 3.0);
  CHECK(fts::parse_expr("8 / 4 / 2").eval(0, 0) == 1.0);
  CHECK(fts::parse_expr("abs(x - t)").eval(0.25, 1.0) == 0.75);
  CHECK(fts::parse_expr("1.5e-3 * 2").eval(0, 0) == doctest::Approx(3e-3));
  CHECK(fts::parse_expr("cos(t)").eval(0, 0) == 1.0);
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(fts::parse_expr("1/x").eval(0.0, 0.0), fts::EvalError);
  CHECK_THROWS_AS(fts::parse_expr("x^-1").eval(0.0, 0.0), fts::EvalError);
  CHECK(fts::parse_expr("1/x").eval(2.0, 0.0) == 0.5);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    fts::parse_expr("x*(1-x");
    FAIL("expected a parse error");
  } catch (const fts::ParseError& e) {
    CHECK(e.offset() == 6);
    CHECK(std::string(e.what()).find("expected ')'") != std::string::npos);
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  }
  try {
    fts::parse_expr("1 + y");
    FAIL("expected a parse error");
  } catch (const fts::ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(std::string(e.what()).find("unknown identifier 'y'") != std::string::npos);
  }
  CHECK_THROWS_AS(fts::parse_expr(""), fts::ParseError);
  CHECK_THROWS_AS(fts::parse_expr("1 +"), fts::ParseError);
  CHECK_THROWS_AS(fts::parse_expr("x^1.5"), fts::ParseError);
  CHECK_THROWS_AS(fts::parse_expr("sin x"), fts::ParseError);
  CHECK_THROWS_AS(fts::parse_expr("1 2"), fts::ParseError);
  CHECK_THROWS_AS(fts::parse_expr("tan(x)"), fts::ParseError);
}

TEST_CASE("pretty printing uses minimal parentheses") {
  CHECK(fts::pretty_print(fts::parse_expr("1+0.1*sin(t)")) == "1 + 0.1 * sin(t)");
  CHECK(fts::pretty_print(fts::parse_expr("(x - 1) - (t - 2)")) == "x - 1 - (t - 2)");
  CHECK(fts::pretty_print(fts::parse_expr("x/(t*2)")) == "x / (t * 2)");
  CHECK(fts::pretty_print(fts::parse_expr("((x))")) == "x");
}

namespace {

fts::ExprNodePtr random_tree(std::mt19937_64& rng, int depth) {
  auto node = std::make_shared<ExprNode>();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  switch (pick(rng)) {
    case 0:
      node->kind = ExprNode::Kind::number;
      node->value = std::abs(val(rng));
      break;
    case 1:
      node->kind = ExprNode::Kind::variable;
      node->var = rng() % 2 ? fts::Variable::x : fts::Variable::t;
      break;
    case 2:
      node->kind = ExprNode::Kind::negate;
      node->lhs = random_tree(rng, depth - 1);
      break;
    case 3:
      node->kind = ExprNode::Kind::power;
      node->exponent = static_cast<int>(rng() % 4);
      node->lhs = random_tree(rng, depth - 1);
      break;
    case 4:
      node->kind = ExprNode::Kind::call;
      node->func = static_cast<fts::Function>(rng() % 4);
      node->lhs = random_tree(rng, depth - 1);
      break;
    default:
      node->kind = ExprNode::Kind::binary;
      node->op = static_cast<fts::BinaryOp>(rng() % 3);  // no division: stays total
      node->lhs = random_tree(rng, depth - 1);
      node->rhs = random_tree(rng, depth - 1);
      break;
  }
  return node;
}

} // namespace

TEST_CASE("property: print/parse round trip") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = Expr::from_tree(random_tree(rng, 5));
    const std::string printed = e.to_string();
    const Expr back = fts::parse_expr(printed);
    CHECK(back.to_string() == printed);
    for (int i = 0; i < 100; ++i) {
      const double x = coord(rng);
      const double t = coord(rng);
      const double v1 = e.eval(x, t);
      const double v2 = back.eval(x, t);
      CHECK(std::bit_cast<std::uint64_t>(v1) == std::bit_cast<std::uint64_t>(v2));
    }
  }
}

} // TEST_SUITE

// SPDX-License-Identifier: Apache-2.0
#include "dagsobol/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "dagsobol/errors.hpp"

namespace dagsobol {

struct Expression::Node {
  enum class Op { constant, variable, add, sub, mul, div, pow, neg } op;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, std::set<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw DataError("expression error at offset " + std::to_string(pos_) + ": " + what +
                    " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Op::add, lhs, term());
      } else if (eat('-')) {
        lhs = make(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (eat('*')) {
        lhs = make(Op::mul, lhs, factor());
      } else if (eat('/')) {
        lhs = make(Op::div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (eat('^')) return make(Op::pow, base, factor());  // right associative
    return base;
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [next, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc{}) fail("bad numeric literal");
      pos_ = static_cast<std::size_t>(next - s_.data());
      auto n = make(Op::constant);
      const_cast<Expression::Node*>(n.get())->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      auto n = make(Op::variable);
      const_cast<Expression::Node*>(n.get())->name = s_.substr(start, pos_ - start);
      vars_.insert(n->name);
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::set<std::string>& vars_;
  std::size_t pos_ = 0;
};

Eigen::ArrayXd eval_node(const Expression::Node& n, std::size_t rows,
                         const std::function<Eigen::ArrayXd(const std::string&)>& resolve) {
  switch (n.op) {
    case Op::constant:
      return Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(rows), n.value);
    case Op::variable:
      return resolve(n.name);
    case Op::add:
      return eval_node(*n.lhs, rows, resolve) + eval_node(*n.rhs, rows, resolve);
    case Op::sub:
      return eval_node(*n.lhs, rows, resolve) - eval_node(*n.rhs, rows, resolve);
    case Op::mul:
      return eval_node(*n.lhs, rows, resolve) * eval_node(*n.rhs, rows, resolve);
    case Op::div:
      return eval_node(*n.lhs, rows, resolve) / eval_node(*n.rhs, rows, resolve);
    case Op::pow: {
      Eigen::ArrayXd base = eval_node(*n.lhs, rows, resolve);
      Eigen::ArrayXd exp = eval_node(*n.rhs, rows, resolve);
      return base.binaryExpr(exp, [](double b, double e) { return std::pow(b, e); });
    }
    case Op::neg:
      return -eval_node(*n.lhs, rows, resolve);
  }
  return {};
}

double eval_scalar_node(const Expression::Node& n,
                        const std::function<double(const std::string&)>& resolve) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return resolve(n.name);
    case Op::add: return eval_scalar_node(*n.lhs, resolve) + eval_scalar_node(*n.rhs, resolve);
    case Op::sub: return eval_scalar_node(*n.lhs, resolve) - eval_scalar_node(*n.rhs, resolve);
    case Op::mul: return eval_scalar_node(*n.lhs, resolve) * eval_scalar_node(*n.rhs, resolve);
    case Op::div: return eval_scalar_node(*n.lhs, resolve) / eval_scalar_node(*n.rhs, resolve);
    case Op::pow:
      return std::pow(eval_scalar_node(*n.lhs, resolve), eval_scalar_node(*n.rhs, resolve));
    case Op::neg: return -eval_scalar_node(*n.lhs, resolve);
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  Parser p(text, e.vars_);
  e.root_ = p.run();
  return e;
}

Eigen::ArrayXd Expression::evaluate(
    std::size_t rows,
    const std::function<Eigen::ArrayXd(const std::string&)>& resolve) const {
  if (!root_) throw UsageError("evaluating an empty expression");
  return eval_node(*root_, rows, resolve);
}

double Expression::evaluate_scalar(
    const std::function<double(const std::string&)>& resolve) const {
  if (!root_) throw UsageError("evaluating an empty expression");
  return eval_scalar_node(*root_, resolve);
}

}  // namespace dagsobol

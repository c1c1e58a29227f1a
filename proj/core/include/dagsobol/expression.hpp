// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <set>
#include <string>

namespace dagsobol {

/// Arithmetic expression over named variables: +, -, *, /, ^ (right
/// associative), unary minus, parentheses, numeric literals, identifiers.
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& text);

  const std::set<std::string>& free_variables() const { return vars_; }
  const std::string& text() const { return text_; }
  bool empty() const { return !root_; }

  /// Vectorized evaluation: the resolver returns the column for a name.
  Eigen::ArrayXd evaluate(
      std::size_t rows,
      const std::function<Eigen::ArrayXd(const std::string&)>& resolve) const;

  double evaluate_scalar(
      const std::function<double(const std::string&)>& resolve) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::set<std::string> vars_;
  std::string text_;
};

}  // namespace dagsobol

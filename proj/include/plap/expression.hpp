#pragma once

// Arithmetic expressions over t and x1..x3 for config-supplied data:
//   + - * / ^ (right-associative), unary minus, parentheses,
//   cos, sin, exp, and the constant pi.

#include <memory>
#include <span>
#include <string>

namespace plap {

class Expression {
 public:
  /// Throws std::invalid_argument with the offending column on a syntax error.
  static Expression parse(const std::string& text);

  double operator()(double t, std::span<const double> x) const;
  const std::string& text() const { return text_; }
  bool uses_time() const { return uses_time_; }
  /// Largest spatial index referenced (x2 -> 2); 0 if none.
  int max_axis() const { return max_axis_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_time_ = false;
  int max_axis_ = 0;
};

}  // namespace plap

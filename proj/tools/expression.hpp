#pragma once

// Arithmetic expressions in one variable x, e.g. "2*sin(2*pi*(x + 1/4))".
// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
// the constant pi and the functions sin cos tan exp log sqrt abs.

#include <memory>
#include <stdexcept>
#include <string>

namespace mfg1d::cli {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expression {
 public:
  /// Throws ExpressionError with the offending position on a syntax error.
  static Expression parse(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace mfg1d::cli

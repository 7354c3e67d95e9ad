#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>

#include "mfg1d/fourier.hpp"

namespace mfg1d::cli {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double x) const {
    switch (kind) {
      case Kind::Number: return number;
      case Kind::Variable: return x;
      case Kind::Unary: return -lhs->eval(x);
      case Kind::Call: return fn(lhs->eval(x));
      case Kind::Binary: {
        const double a = lhs->eval(x);
        const double b = rhs->eval(x);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          default: return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

const std::map<std::string, double (*)(double)>& functions() {
  static const std::map<std::string, double (*)(double)> table{
      {"sin", [](double v) { return std::sin(v); }},
      {"cos", [](double v) { return std::cos(v); }},
      {"tan", [](double v) { return std::tan(v); }},
      {"exp", [](double v) { return std::exp(v); }},
      {"log", [](double v) { return std::log(v); }},
      {"sqrt", [](double v) { return std::sqrt(v); }},
      {"abs", [](double v) { return std::abs(v); }},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(what + " at position " + std::to_string(pos_) + " in \"" + text_ + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = Kind::Binary;
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = binary('+', lhs, product());
      } else if (accept('-')) {
        lhs = binary('-', lhs, product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary('*', lhs, unary());
      } else if (accept('/')) {
        lhs = binary('/', lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Kind::Unary;
      node->lhs = unary();
      return node;
    }
    if (accept('+')) return unary();
    return power();
  }

  // -x^2 parses as -(x^2) and 2^-1 is accepted.
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto node = std::make_shared<Expression::Node>();
      node->number = value;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      auto node = std::make_shared<Expression::Node>();
      if (name == "x") {
        node->kind = Kind::Variable;
        return node;
      }
      if (name == "pi") {
        node->number = kPi;
        return node;
      }
      const auto it = functions().find(name);
      if (it == functions().end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      node->kind = Kind::Call;
      node->fn = it->second;
      node->lhs = sum();
      if (!accept(')')) fail("expected ')'");
      return node;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace mfg1d::cli

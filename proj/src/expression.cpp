#include "plap/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace plap {

struct Expression::Node {
  enum class Op { number, time, axis, neg, add, sub, mul, div, pow, cos, sin, exp };
  Op op = Op::number;
  double value = 0.0;
  int axis = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  bool uses_time = false;
  int max_axis = 0;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + s_ + "', column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (eat('+')) n = make(Op::add, n, product());
      else if (eat('-')) n = make(Op::sub, n, product());
      else return n;
    }
  }

  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Op::mul, n, unary());
      else if (eat('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }

  // -a^b is -(a^b)
  NodePtr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ > from;
    };
    const std::size_t start = pos_;
    bool any = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (!digits()) fail("malformed exponent");
    }
    auto n = std::make_shared<Node>();
    n->value = std::stod(s_.substr(start, pos_ - start));
    return n;
  }

  NodePtr word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string w = s_.substr(start, pos_ - start);
    if (w == "t") {
      uses_time = true;
      return make(Op::time);
    }
    if (w == "pi") {
      auto n = std::make_shared<Node>();
      n->value = std::numbers::pi;
      return n;
    }
    if (w == "x1" || w == "x2" || w == "x3") {
      auto n = std::make_shared<Node>();
      n->op = Op::axis;
      n->axis = w[1] - '1';
      max_axis = std::max(max_axis, n->axis + 1);
      return n;
    }
    Op f;
    if (w == "cos") f = Op::cos;
    else if (w == "sin") f = Op::sin;
    else if (w == "exp") f = Op::exp;
    else {
      pos_ = start;
      fail("unknown identifier '" + w + "'");
    }
    if (!eat('(')) fail("expected '(' after " + w);
    NodePtr arg = sum();
    if (!eat(')')) fail("expected ')'");
    return make(f, arg);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double t, std::span<const double> x) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::time: return t;
    case Op::axis: return static_cast<std::size_t>(n.axis) < x.size() ? x[n.axis] : 0.0;
    case Op::neg: return -eval(*n.a, t, x);
    case Op::add: return eval(*n.a, t, x) + eval(*n.b, t, x);
    case Op::sub: return eval(*n.a, t, x) - eval(*n.b, t, x);
    case Op::mul: return eval(*n.a, t, x) * eval(*n.b, t, x);
    case Op::div: return eval(*n.a, t, x) / eval(*n.b, t, x);
    case Op::pow: return std::pow(eval(*n.a, t, x), eval(*n.b, t, x));
    case Op::cos: return std::cos(eval(*n.a, t, x));
    case Op::sin: return std::sin(eval(*n.a, t, x));
    case Op::exp: return std::exp(eval(*n.a, t, x));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.parse();
  e.text_ = text;
  e.uses_time_ = p.uses_time;
  e.max_axis_ = p.max_axis;
  return e;
}

double Expression::operator()(double t, std::span<const double> x) const {
  if (!root_) return 0.0;
  return eval(*root_, t, x);
}

}  // namespace plap

#include "homfinsler/expr.hpp"

#include <cctype>
#include <cstdlib>

#include "homfinsler/errors.hpp"

namespace homfinsler {

struct Expression::Node {
  enum class Op { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp, Log };
  Op op = Op::Number;
  double number = 0;
  int variable = -1;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr parse_all(int& max_var) {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    max_var = max_var_;
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
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
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (eat('+')) n = make(Node::Op::Add, n, product());
      else if (eat('-')) n = make(Node::Op::Sub, n, product());
      else return n;
    }
  }
  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::Op::Mul, n, unary());
      else if (eat('/')) n = make(Node::Op::Div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodePtr n = sum();
      expect(')');
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "sqrt" || name == "exp" || name == "log") {
        expect('(');
        NodePtr arg = sum();
        expect(')');
        return make(name == "sqrt" ? Node::Op::Sqrt : name == "exp" ? Node::Op::Exp : Node::Op::Log, arg);
      }
      if (name == "pow") {
        expect('(');
        NodePtr a = sum();
        expect(',');
        NodePtr b = sum();
        expect(')');
        return make(Node::Op::Pow, a, b);
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          auto n = std::make_shared<Node>();
          n->op = Node::Op::Variable;
          n->variable = static_cast<int>(i);
          max_var_ = std::max(max_var_, n->variable);
          return n;
        }
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
  int max_var_ = -1;
};

template <class T>
T evaluate(const Node& n, const std::vector<T>& args) {
  using std::exp, std::log, std::pow, std::sqrt;
  switch (n.op) {
    case Node::Op::Number: return T(n.number);
    case Node::Op::Variable: return args.at(static_cast<std::size_t>(n.variable));
    case Node::Op::Add: return evaluate(*n.lhs, args) + evaluate(*n.rhs, args);
    case Node::Op::Sub: return evaluate(*n.lhs, args) - evaluate(*n.rhs, args);
    case Node::Op::Mul: return evaluate(*n.lhs, args) * evaluate(*n.rhs, args);
    case Node::Op::Div: return evaluate(*n.lhs, args) / evaluate(*n.rhs, args);
    case Node::Op::Pow: return pow(evaluate(*n.lhs, args), evaluate(*n.rhs, args));
    case Node::Op::Neg: return -evaluate(*n.lhs, args);
    case Node::Op::Sqrt: return sqrt(evaluate(*n.lhs, args));
    case Node::Op::Exp: return exp(evaluate(*n.lhs, args));
    case Node::Op::Log: return log(evaluate(*n.lhs, args));
  }
  return T(0.0);
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  Parser p(text, variables);
  e.root_ = p.parse_all(e.max_var_);
  e.text_ = text;
  return e;
}

double Expression::eval(const std::vector<double>& args) const { return evaluate(*root_, args); }
HyperDual Expression::eval(const std::vector<HyperDual>& args) const { return evaluate(*root_, args); }

}  // namespace homfinsler

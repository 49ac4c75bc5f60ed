#include "amop/formula.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace amop {

namespace {

double eval_node(const FormulaNode& node, double n) {
  switch (node.op) {
    case FormulaOp::Number:
      return node.value;
    case FormulaOp::Var:
      return n;
    case FormulaOp::Neg:
      return -eval_node(*node.lhs, n);
    case FormulaOp::Add:
      return eval_node(*node.lhs, n) + eval_node(*node.rhs, n);
    case FormulaOp::Sub:
      return eval_node(*node.lhs, n) - eval_node(*node.rhs, n);
    case FormulaOp::Mul:
      return eval_node(*node.lhs, n) * eval_node(*node.rhs, n);
    case FormulaOp::Div:
      return eval_node(*node.lhs, n) / eval_node(*node.rhs, n);
    case FormulaOp::Pow:
      return std::pow(eval_node(*node.lhs, n), eval_node(*node.rhs, n));
    case FormulaOp::Sqrt:
      return std::sqrt(eval_node(*node.lhs, n));
    case FormulaOp::Abs:
      return std::fabs(eval_node(*node.lhs, n));
  }
  return 0.0;
}

// Printing precedence levels; larger binds tighter.
int precedence(FormulaOp op) {
  switch (op) {
    case FormulaOp::Add:
    case FormulaOp::Sub:
      return 1;
    case FormulaOp::Mul:
    case FormulaOp::Div:
      return 2;
    case FormulaOp::Neg:
      return 3;
    case FormulaOp::Pow:
      return 4;
    default:
      return 5;  // atoms and calls never need parens
  }
}

void print_number(std::ostream& os, double v) {
  if (v == static_cast<long long>(v) && std::fabs(v) < 1e15) {
    os << static_cast<long long>(v);
  } else {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << v;
    os << tmp.str();
  }
}

void print_node(std::ostream& os, const FormulaNode& node, int parent_prec,
                bool right_operand) {
  const int prec = precedence(node.op);
  // A right operand of equal precedence needs parens for the left-associative
  // operators ("a-(b-c)"); the right-associative ^ is the mirror case and is
  // handled by passing right_operand=false from Pow.
  const bool parens = prec < parent_prec || (prec == parent_prec && right_operand);
  if (parens) os << '(';
  switch (node.op) {
    case FormulaOp::Number:
      print_number(os, node.value);
      break;
    case FormulaOp::Var:
      os << 'n';
      break;
    case FormulaOp::Neg:
      os << '-';
      print_node(os, *node.lhs, prec, true);
      break;
    case FormulaOp::Add:
      print_node(os, *node.lhs, prec, false);
      os << " + ";
      print_node(os, *node.rhs, prec, true);
      break;
    case FormulaOp::Sub:
      print_node(os, *node.lhs, prec, false);
      os << " - ";
      print_node(os, *node.rhs, prec, true);
      break;
    case FormulaOp::Mul:
      print_node(os, *node.lhs, prec, false);
      os << "*";
      print_node(os, *node.rhs, prec, true);
      break;
    case FormulaOp::Div:
      print_node(os, *node.lhs, prec, false);
      os << "/";
      print_node(os, *node.rhs, prec, true);
      break;
    case FormulaOp::Pow:
      print_node(os, *node.lhs, prec, true);
      os << "^";
      print_node(os, *node.rhs, prec, false);
      break;
    case FormulaOp::Sqrt:
      os << "sqrt(";
      print_node(os, *node.lhs, 0, false);
      os << ')';
      break;
    case FormulaOp::Abs:
      os << "abs(";
      print_node(os, *node.lhs, 0, false);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

bool nodes_equal(const FormulaNode& a, const FormulaNode& b) {
  if (a.op != b.op) return false;
  if (a.op == FormulaOp::Number) return a.value == b.value;
  if (a.lhs && (!b.lhs || !nodes_equal(*a.lhs, *b.lhs))) return false;
  if (!a.lhs && b.lhs) return false;
  if (a.rhs && (!b.rhs || !nodes_equal(*a.rhs, *b.rhs))) return false;
  if (!a.rhs && b.rhs) return false;
  return true;
}

bool node_depends_on_n(const FormulaNode& node) {
  if (node.op == FormulaOp::Var) return true;
  if (node.lhs && node_depends_on_n(*node.lhs)) return true;
  if (node.rhs && node_depends_on_n(*node.rhs)) return true;
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  FormulaNodePtr run() {
    auto expr = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return expr;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  FormulaNodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = make_binary(FormulaOp::Add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = make_binary(FormulaOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  FormulaNodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = make_binary(FormulaOp::Mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = make_binary(FormulaOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  FormulaNodePtr parse_unary() {
    if (eat('-')) {
      return make_unary(FormulaOp::Neg, parse_unary());
    }
    return parse_power();
  }

  FormulaNodePtr parse_power() {
    auto base = parse_primary();
    if (eat('^')) {
      // Right-associative; the exponent may carry its own unary minus.
      return make_binary(FormulaOp::Pow, base, parse_unary());
    }
    return base;
  }

  FormulaNodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of formula", pos_);
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_expr();
      if (!eat(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return parse_identifier();
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  FormulaNodePtr parse_number() {
    const std::size_t start = pos_;
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) {
      throw ParseError("malformed number", start);
    }
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) {
      throw ParseError("numeric literal out of range", start);
    }
    return make_number(v);
  }

  FormulaNodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "n") {
      return make_var();
    }
    if (name == "sqrt" || name == "abs") {
      if (!eat('(')) {
        throw ParseError("expected '(' after function name", pos_);
      }
      auto arg = parse_expr();
      if (!eat(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return make_unary(name == "sqrt" ? FormulaOp::Sqrt : FormulaOp::Abs, arg);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

double Formula::eval(double n) const { return eval_node(*root_, n); }

std::string Formula::str() const {
  std::ostringstream os;
  print_node(os, *root_, 0, false);
  return os.str();
}

bool Formula::structurally_equal(const Formula& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return nodes_equal(*root_, *other.root_);
}

bool Formula::depends_on_n() const { return root_ && node_depends_on_n(*root_); }

Formula parse_formula(std::string_view src) {
  return Formula(Parser(src).run());
}

FormulaNodePtr make_number(double v) {
  auto node = std::make_shared<FormulaNode>();
  node->op = FormulaOp::Number;
  node->value = v;
  return node;
}

FormulaNodePtr make_var() {
  auto node = std::make_shared<FormulaNode>();
  node->op = FormulaOp::Var;
  return node;
}

FormulaNodePtr make_unary(FormulaOp op, FormulaNodePtr a) {
  auto node = std::make_shared<FormulaNode>();
  node->op = op;
  node->lhs = std::move(a);
  return node;
}

FormulaNodePtr make_binary(FormulaOp op, FormulaNodePtr a, FormulaNodePtr b) {
  auto node = std::make_shared<FormulaNode>();
  node->op = op;
  node->lhs = std::move(a);
  node->rhs = std::move(b);
  return node;
}

namespace {

FormulaNodePtr shift_node(const FormulaNodePtr& node, double shift) {
  if (!node) return nullptr;
  if (node->op == FormulaOp::Var) {
    return make_binary(FormulaOp::Add, make_var(), make_number(shift));
  }
  if (!node->lhs && !node->rhs) return node;
  auto out = std::make_shared<FormulaNode>();
  out->op = node->op;
  out->value = node->value;
  out->lhs = shift_node(node->lhs, shift);
  out->rhs = shift_node(node->rhs, shift);
  return out;
}

}  // namespace

Formula shift_index(const Formula& f, double shift) {
  if (shift == 0.0 || f.empty()) return f;
  return Formula(shift_node(f.root_ptr(), shift));
}

}  // namespace amop

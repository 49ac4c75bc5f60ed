// Eigenvalue-formula mini-language: expressions in one variable n built from
// numeric literals, + - * / ^, sqrt, abs and parentheses. Values are real;
// complex spectra enter through explicit eigenvalue lists, not formulas.
#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "amop/errors.hpp"

namespace amop {

enum class FormulaOp {
  Number,
  Var,   // the index variable n
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sqrt,
  Abs,
};

struct FormulaNode {
  FormulaOp op = FormulaOp::Number;
  double value = 0.0;  // Number only
  std::shared_ptr<const FormulaNode> lhs;
  std::shared_ptr<const FormulaNode> rhs;  // binary ops only
};

using FormulaNodePtr = std::shared_ptr<const FormulaNode>;

// Immutable expression tree with value semantics.
class Formula {
 public:
  Formula() = default;
  explicit Formula(FormulaNodePtr root) : root_(std::move(root)) {}

  bool empty() const { return root_ == nullptr; }
  const FormulaNode& root() const { return *root_; }
  FormulaNodePtr root_ptr() const { return root_; }

  // Evaluates at index n. Division by zero, sqrt of a negative number and
  // 0^negative yield NaN/Inf; callers decide whether that is an error.
  double eval(double n) const;

  // Canonical text form; parse(str()) reproduces the tree, and printing is a
  // fixpoint of parse-then-print.
  std::string str() const;

  bool structurally_equal(const Formula& other) const;

  // Whether the tree references the variable n at all.
  bool depends_on_n() const;

 private:
  FormulaNodePtr root_;
};

// Precedence: ^ binds tighter than unary minus, which binds tighter than
// * /, which bind tighter than + -. Binary + - * / associate left, ^ right.
// Throws ParseError with a byte offset on bad input.
Formula parse_formula(std::string_view src);

// Node constructors used when deriving formulas (reciprocals, transforms).
FormulaNodePtr make_number(double v);
FormulaNodePtr make_var();
FormulaNodePtr make_unary(FormulaOp op, FormulaNodePtr a);
FormulaNodePtr make_binary(FormulaOp op, FormulaNodePtr a, FormulaNodePtr b);

// f(n) -> f(n + shift): relocates the index variable.
Formula shift_index(const Formula& f, double shift);

}  // namespace amop

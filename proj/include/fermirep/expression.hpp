#pragma once

// Operator expressions typed by the user, e.g.
//
//   (adag(1)*a(3) + adag(3)*a(1)) * (1 - 2*N(2))
//   -i adag(1)*a(2) + i a(2)'*a(1)
//
// Grammar, loosest binding first:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | scaled
//   scaled  := NUMBER postfix?        number juxtaposed with an operand
//            | postfix
//   postfix := primary "'"*           postfix dagger
//   primary := NUMBER | 'i' | 'a(' INT ')' | 'adag(' INT ')' | 'N' | 'N(' INT ')'
//            | 'sqrt(' expr ')' | '(' expr ')'
//
// Mode indices are 1-based. A scalar in operator position means scalar times
// the identity. Division is only by scalars.

#include <memory>
#include <string>
#include <string_view>

#include "fermirep/fock.hpp"

namespace fermirep {

enum class NodeKind {
  number,
  imaginary_unit,
  annihilate,
  create,
  mode_number,
  total_number,
  sum,
  difference,
  product,
  quotient,
  scalar_product,
  negate,
  dagger,
  square_root,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // number
  int mode = 0;        // annihilate, create, mode_number
  ExprPtr lhs;         // binary operands; the single operand of unary nodes
  ExprPtr rhs;
};

/// Structural equality of two trees.
bool same_tree(const ExprNode& a, const ExprNode& b);

class OperatorExpression {
 public:
  explicit OperatorExpression(ExprPtr root);

  /// Throws ParseError carrying the 0-based column of the offending token.
  static OperatorExpression parse(std::string_view text);

  const ExprNode& root() const noexcept { return *root_; }
  const ExprPtr& root_ptr() const noexcept { return root_; }

  /// Minimal-parenthesis rendering; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  /// Largest mode index referenced (0 if none).
  int max_mode() const;

  /// Throws ArgumentError for mode indices outside [1, n] or division by a
  /// non-scalar.
  FockOperator evaluate(int n) const;
  FockOperator evaluate(const LadderSet& ladders) const;

  friend bool operator==(const OperatorExpression& a, const OperatorExpression& b) {
    return same_tree(*a.root_, *b.root_);
  }

 private:
  ExprPtr root_;
};

}  // namespace fermirep

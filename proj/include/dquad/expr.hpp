#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dquad::expr {

enum class Var { X, Y };

enum class UnaryOp { Negate, Sin, Cos, Exp, Abs, Sqrt };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// Lexical or syntactic error. `offset` is the byte position in the source
// string where the problem was detected (== source length at end of input).
struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t offset_)
        : std::runtime_error(message), offset(offset_) {}
    std::size_t offset;
};

// Evaluation left the reals or overflowed. `node_kind` names the operation
// that failed ("div", "sqrt", "exp", ...).
struct EvalDomainError : std::runtime_error {
    EvalDomainError(const std::string& message, std::string node_kind_)
        : std::runtime_error(message), node_kind(std::move(node_kind_)) {}
    std::string node_kind;
};

// Immutable expression tree in the variables x and y.
//
// Concrete syntax accepted by parse():
//   expr    := term  { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]          (right-associative)
//   primary := NUMBER | "x" | "y" | "pi" | FUNC "(" expr ")" | "(" expr ")"
//   FUNC    := sin | cos | exp | abs | sqrt
//
// Unary minus binds tighter than "*" but looser than "^", so "-x^2" is
// -(x^2) and "2^-3" is 2^(-3).
class Expression {
  public:
    // Throws ParseError on any malformed input; never crashes.
    static Expression parse(std::string_view source);

    static Expression constant(double value);
    static Expression variable(Var v);
    static Expression pi();
    static Expression unary(UnaryOp op, Expression operand);
    static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

    // Returns a finite double or throws EvalDomainError.
    double evaluate(double x, double y) const;

    std::set<Var> free_variables() const;

    // Fully parenthesized form; parse(to_string()) reproduces the tree.
    std::string to_string() const;

    // Structural equality.
    friend bool operator==(const Expression& a, const Expression& b);
    friend bool operator!=(const Expression& a, const Expression& b) {
        return !(a == b);
    }

    struct Node;

  private:
    explicit Expression(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
};

}  // namespace dquad::expr

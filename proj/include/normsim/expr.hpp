#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "normsim/value.hpp"

namespace normsim {

// ---------------------------------------------------------------------------
// Condition language
//
// Grammar, loosest binding first:
//
//   or_expr   := and_expr ("or" and_expr)*
//   and_expr  := not_expr ("and" not_expr)*
//   not_expr  := "not" not_expr | comparison
//   comparison:= additive (("=="|"!="|"<"|"<="|">"|">=") additive)?
//   additive  := multiplicative (("+"|"-") multiplicative)*
//   multiplicative := unary (("*"|"/") unary)*
//   unary     := "-" unary | primary
//   primary   := INT | FLOAT | BOOL | IDENT | IDENT "(" args ")" | "(" or_expr ")"
//
// Comparisons are non-associative: "a < b < c" is a parse error.
// Identifiers are [A-Za-z_][A-Za-z0-9_]*; keywords (true, false, and, or,
// not) are case-sensitive.
// ---------------------------------------------------------------------------

enum class TokenKind { Ident, Int, Float, Bool, Op, LParen, RParen, Comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t offset;  // byte position in the source
};

enum class UnaryOp { Not, Negate };

enum class BinaryOp {
  And,
  Or,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Mul,
  Div,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Literal {
    Value value;
  };
  struct Identifier {
    std::string name;
  };
  struct Unary {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Call {
    std::string function;
    std::vector<ExprPtr> args;
  };

  std::variant<Literal, Identifier, Unary, Binary, Call> node;
  std::size_t offset = 0;  // source position when parsed; 0 for built trees
};

ExprPtr make_literal(Value v, std::size_t offset = 0);
ExprPtr make_identifier(std::string name, std::size_t offset = 0);
ExprPtr make_unary(UnaryOp op, ExprPtr operand, std::size_t offset = 0);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs,
                    std::size_t offset = 0);
ExprPtr make_call(std::string function, std::vector<ExprPtr> args,
                  std::size_t offset = 0);

// Host function callable from conditions ("a pointer to a predefined
// function"). Functions must be pure for evaluation to stay deterministic.
struct HostFunction {
  std::size_t arity;
  std::function<Value(std::span<const Value>)> fn;
};

class FunctionRegistry {
 public:
  void register_function(std::string name, std::size_t arity,
                         std::function<Value(std::span<const Value>)> fn);
  const HostFunction* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }

 private:
  std::map<std::string, HostFunction> functions_;
};

// Two fact layers: agent facts shadow environment facts. A miss in both
// layers is an evaluation error, never a default.
class EvaluationContext {
 public:
  EvaluationContext() = default;
  EvaluationContext(const Bindings* agent, const Bindings* environment,
                    const FunctionRegistry* functions)
      : agent_(agent), environment_(environment), functions_(functions) {}

  std::optional<Value> lookup(const std::string& name) const;
  const FunctionRegistry* functions() const { return functions_; }

 private:
  const Bindings* agent_ = nullptr;
  const Bindings* environment_ = nullptr;
  const FunctionRegistry* functions_ = nullptr;
};

std::vector<Token> tokenize(const std::string& source);  // throws LexError
ExprPtr parse(const std::vector<Token>& tokens);         // throws ParseError
ExprPtr parse_source(const std::string& source);         // tokenize + parse

// Strict evaluation except "and"/"or", which short-circuit left to right.
// Throws EvaluationError.
Value evaluate(const Expr& expr, const EvaluationContext& ctx);

// Fully parenthesized rendering; parse(tokenize(pretty_print(e))) is
// structurally identical to e.
std::string pretty_print(const Expr& expr);

// Structural equality, ignoring source offsets.
bool expr_equal(const Expr& a, const Expr& b);

}  // namespace normsim

#include "normsim/expr.hpp"

#include <cctype>
#include <charconv>
#include <utility>

#include "normsim/errors.hpp"

namespace normsim {

ExprPtr make_literal(Value v, std::size_t offset) {
  return std::make_shared<Expr>(Expr{Expr::Literal{std::move(v)}, offset});
}
ExprPtr make_identifier(std::string name, std::size_t offset) {
  return std::make_shared<Expr>(Expr{Expr::Identifier{std::move(name)}, offset});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand, std::size_t offset) {
  return std::make_shared<Expr>(Expr{Expr::Unary{op, std::move(operand)}, offset});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, std::size_t offset) {
  return std::make_shared<Expr>(
      Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}, offset});
}
ExprPtr make_call(std::string function, std::vector<ExprPtr> args,
                  std::size_t offset) {
  return std::make_shared<Expr>(
      Expr{Expr::Call{std::move(function), std::move(args)}, offset});
}

void FunctionRegistry::register_function(
    std::string name, std::size_t arity,
    std::function<Value(std::span<const Value>)> fn) {
  functions_[std::move(name)] = HostFunction{arity, std::move(fn)};
}

const HostFunction* FunctionRegistry::find(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::optional<Value> EvaluationContext::lookup(const std::string& name) const {
  if (agent_) {
    auto it = agent_->find(name);
    if (it != agent_->end()) return it->second;
  }
  if (environment_) {
    auto it = environment_->find(name);
    if (it != environment_->end()) return it->second;
  }
  return std::nullopt;
}

// --------------------------------------------------------------------------
// Lexer
// --------------------------------------------------------------------------

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();

  while (i < n) {
    char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }

    std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(source[i])) ++i;
      std::string word = source.substr(start, i - start);
      if (word == "true" || word == "false") {
        tokens.push_back({TokenKind::Bool, std::move(word), start});
      } else if (word == "and" || word == "or" || word == "not") {
        tokens.push_back({TokenKind::Op, std::move(word), start});
      } else {
        tokens.push_back({TokenKind::Ident, std::move(word), start});
      }
      continue;
    }

    if (is_digit(c)) {
      bool is_float = false;
      while (i < n && is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        if (i + 1 >= n || !is_digit(source[i + 1]))
          throw LexError("unterminated number literal", start);
        is_float = true;
        ++i;
        while (i < n && is_digit(source[i])) ++i;
      }
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
        if (j >= n || !is_digit(source[j]))
          throw LexError("unterminated number literal", start);
        is_float = true;
        i = j;
        while (i < n && is_digit(source[i])) ++i;
      }
      tokens.push_back({is_float ? TokenKind::Float : TokenKind::Int,
                        source.substr(start, i - start), start});
      continue;
    }

    switch (c) {
      case '(':
        tokens.push_back({TokenKind::LParen, "(", start});
        ++i;
        continue;
      case ')':
        tokens.push_back({TokenKind::RParen, ")", start});
        ++i;
        continue;
      case ',':
        tokens.push_back({TokenKind::Comma, ",", start});
        ++i;
        continue;
      case '+':
      case '-':
      case '*':
      case '/':
        tokens.push_back({TokenKind::Op, std::string(1, c), start});
        ++i;
        continue;
      case '=':
        if (i + 1 < n && source[i + 1] == '=') {
          tokens.push_back({TokenKind::Op, "==", start});
          i += 2;
          continue;
        }
        throw LexError("'=' is not an operator; use '=='", start);
      case '!':
        if (i + 1 < n && source[i + 1] == '=') {
          tokens.push_back({TokenKind::Op, "!=", start});
          i += 2;
          continue;
        }
        throw LexError("'!' is not an operator; use 'not'", start);
      case '<':
        if (i + 1 < n && source[i + 1] == '=') {
          tokens.push_back({TokenKind::Op, "<=", start});
          i += 2;
        } else {
          tokens.push_back({TokenKind::Op, "<", start});
          ++i;
        }
        continue;
      case '>':
        if (i + 1 < n && source[i + 1] == '=') {
          tokens.push_back({TokenKind::Op, ">=", start});
          i += 2;
        } else {
          tokens.push_back({TokenKind::Op, ">", start});
          ++i;
        }
        continue;
      default:
        throw LexError(std::string("unexpected character '") + c + "'", start);
    }
  }
  return tokens;
}

// --------------------------------------------------------------------------
// Parser (recursive descent, precedence per the grammar in expr.hpp)
// --------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ExprPtr run() {
    if (tokens_.empty()) throw ParseError("empty expression", 0);
    ExprPtr e = or_expr();
    if (pos_ < tokens_.size())
      throw ParseError("unexpected token '" + peek().lexeme + "'",
                       peek().offset);
    return e;
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return pos_ >= tokens_.size(); }
  std::size_t here() const {
    return at_end() ? end_offset() : peek().offset;
  }
  std::size_t end_offset() const {
    if (tokens_.empty()) return 0;
    const Token& last = tokens_.back();
    return last.offset + last.lexeme.size();
  }

  bool match_op(const char* lexeme) {
    if (!at_end() && peek().kind == TokenKind::Op && peek().lexeme == lexeme) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_op(const char* lexeme) const {
    return !at_end() && peek().kind == TokenKind::Op &&
           peek().lexeme == lexeme;
  }

  void expect(TokenKind kind, const char* what) {
    if (at_end() || peek().kind != kind)
      throw ParseError(std::string("expected ") + what, here());
    ++pos_;
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (!at_end() && peek_op("or")) {
      std::size_t off = peek().offset;
      ++pos_;
      lhs = make_binary(BinaryOp::Or, std::move(lhs), and_expr(), off);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (!at_end() && peek_op("and")) {
      std::size_t off = peek().offset;
      ++pos_;
      lhs = make_binary(BinaryOp::And, std::move(lhs), not_expr(), off);
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (peek_op("not")) {
      std::size_t off = peek().offset;
      ++pos_;
      return make_unary(UnaryOp::Not, not_expr(), off);
    }
    return comparison();
  }

  static const char* comparison_op(const Token& t) {
    static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
    if (t.kind != TokenKind::Op) return nullptr;
    for (const char* op : ops)
      if (t.lexeme == op) return op;
    return nullptr;
  }

  static BinaryOp to_comparison(const std::string& lexeme) {
    if (lexeme == "==") return BinaryOp::Eq;
    if (lexeme == "!=") return BinaryOp::Ne;
    if (lexeme == "<") return BinaryOp::Lt;
    if (lexeme == "<=") return BinaryOp::Le;
    if (lexeme == ">") return BinaryOp::Gt;
    return BinaryOp::Ge;
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    if (!at_end() && comparison_op(peek())) {
      std::size_t off = peek().offset;
      BinaryOp op = to_comparison(peek().lexeme);
      ++pos_;
      ExprPtr rhs = additive();
      if (!at_end() && comparison_op(peek()))
        throw ParseError("non-associative comparison; parenthesize",
                         peek().offset);
      return make_binary(op, std::move(lhs), std::move(rhs), off);
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (!at_end() && (peek_op("+") || peek_op("-"))) {
      BinaryOp op = peek().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
      std::size_t off = peek().offset;
      ++pos_;
      lhs = make_binary(op, std::move(lhs), multiplicative(), off);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (!at_end() && (peek_op("*") || peek_op("/"))) {
      BinaryOp op = peek().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
      std::size_t off = peek().offset;
      ++pos_;
      lhs = make_binary(op, std::move(lhs), unary(), off);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek_op("-")) {
      std::size_t off = peek().offset;
      ++pos_;
      return make_unary(UnaryOp::Negate, unary(), off);
    }
    return primary();
  }

  ExprPtr primary() {
    if (at_end()) throw ParseError("expected expression", here());
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Int:
      case TokenKind::Float: {
        double v = 0.0;
        auto res =
            std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.lexeme.data() + t.lexeme.size())
          throw ParseError("malformed number literal", t.offset);
        ++pos_;
        return make_literal(Value(v), t.offset);
      }
      case TokenKind::Bool: {
        ++pos_;
        return make_literal(Value(t.lexeme == "true"), t.offset);
      }
      case TokenKind::Ident: {
        std::string name = t.lexeme;
        std::size_t off = t.offset;
        ++pos_;
        if (!at_end() && peek().kind == TokenKind::LParen) {
          ++pos_;
          std::vector<ExprPtr> args;
          if (!at_end() && peek().kind != TokenKind::RParen) {
            args.push_back(or_expr());
            while (!at_end() && peek().kind == TokenKind::Comma) {
              ++pos_;
              args.push_back(or_expr());
            }
          }
          expect(TokenKind::RParen, "')'");
          return make_call(std::move(name), std::move(args), off);
        }
        return make_identifier(std::move(name), off);
      }
      case TokenKind::LParen: {
        ++pos_;
        ExprPtr inner = or_expr();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError("unexpected token '" + t.lexeme + "'", t.offset);
    }
  }
};

}  // namespace

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprPtr parse_source(const std::string& source) {
  return parse(tokenize(source));
}

// --------------------------------------------------------------------------
// Evaluator
// --------------------------------------------------------------------------

namespace {

[[noreturn]] void eval_fail(EvalErrorKind kind, std::string msg,
                            std::size_t offset) {
  throw EvaluationError(kind, std::move(msg), offset);
}

double number_operand(const Value& v, const char* op, std::size_t offset) {
  if (!v.is_number())
    eval_fail(EvalErrorKind::TypeMismatch,
              std::string("operator '") + op + "' needs numbers, got " +
                  v.tag_name(),
              offset);
  return v.as_number();
}

bool boolean_operand(const Value& v, const char* what, std::size_t offset) {
  if (!v.is_boolean())
    eval_fail(EvalErrorKind::TypeMismatch,
              std::string(what) + " needs a boolean, got " + v.tag_name(),
              offset);
  return v.as_boolean();
}

}  // namespace

Value evaluate(const Expr& expr, const EvaluationContext& ctx) {
  return std::visit(
      [&](const auto& node) -> Value {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, Expr::Identifier>) {
          auto v = ctx.lookup(node.name);
          if (!v)
            eval_fail(EvalErrorKind::UnresolvedIdentifier,
                      "unresolved identifier: " + node.name, expr.offset);
          return *v;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          Value operand = evaluate(*node.operand, ctx);
          if (node.op == UnaryOp::Not)
            return Value(!boolean_operand(operand, "'not'", expr.offset));
          return Value(-number_operand(operand, "-", expr.offset));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          switch (node.op) {
            case BinaryOp::And: {
              bool lhs = boolean_operand(evaluate(*node.lhs, ctx), "'and'",
                                         expr.offset);
              if (!lhs) return Value(false);  // short-circuit
              return Value(boolean_operand(evaluate(*node.rhs, ctx), "'and'",
                                           expr.offset));
            }
            case BinaryOp::Or: {
              bool lhs = boolean_operand(evaluate(*node.lhs, ctx), "'or'",
                                         expr.offset);
              if (lhs) return Value(true);  // short-circuit
              return Value(boolean_operand(evaluate(*node.rhs, ctx), "'or'",
                                           expr.offset));
            }
            default:
              break;
          }
          Value lhs = evaluate(*node.lhs, ctx);
          Value rhs = evaluate(*node.rhs, ctx);
          switch (node.op) {
            case BinaryOp::Eq:
            case BinaryOp::Ne: {
              if (lhs.is_boolean() != rhs.is_boolean() ||
                  lhs.is_number() != rhs.is_number())
                eval_fail(EvalErrorKind::TypeMismatch,
                          std::string("cannot compare ") + lhs.tag_name() +
                              " with " + rhs.tag_name(),
                          expr.offset);
              bool eq = lhs == rhs;
              return Value(node.op == BinaryOp::Eq ? eq : !eq);
            }
            case BinaryOp::Lt:
              return Value(number_operand(lhs, "<", expr.offset) <
                           number_operand(rhs, "<", expr.offset));
            case BinaryOp::Le:
              return Value(number_operand(lhs, "<=", expr.offset) <=
                           number_operand(rhs, "<=", expr.offset));
            case BinaryOp::Gt:
              return Value(number_operand(lhs, ">", expr.offset) >
                           number_operand(rhs, ">", expr.offset));
            case BinaryOp::Ge:
              return Value(number_operand(lhs, ">=", expr.offset) >=
                           number_operand(rhs, ">=", expr.offset));
            case BinaryOp::Add:
              return Value(number_operand(lhs, "+", expr.offset) +
                           number_operand(rhs, "+", expr.offset));
            case BinaryOp::Sub:
              return Value(number_operand(lhs, "-", expr.offset) -
                           number_operand(rhs, "-", expr.offset));
            case BinaryOp::Mul:
              return Value(number_operand(lhs, "*", expr.offset) *
                           number_operand(rhs, "*", expr.offset));
            case BinaryOp::Div: {
              double denom = number_operand(rhs, "/", expr.offset);
              if (denom == 0.0)
                eval_fail(EvalErrorKind::DivisionByZero, "division by zero",
                          expr.offset);
              return Value(number_operand(lhs, "/", expr.offset) / denom);
            }
            default:
              break;
          }
          eval_fail(EvalErrorKind::TypeMismatch, "unhandled operator",
                    expr.offset);
        } else {  // Expr::Call
          const FunctionRegistry* registry = ctx.functions();
          const HostFunction* fn =
              registry ? registry->find(node.function) : nullptr;
          if (!fn)
            eval_fail(EvalErrorKind::UnknownFunction,
                      "unknown function: " + node.function, expr.offset);
          if (fn->arity != node.args.size())
            eval_fail(EvalErrorKind::ArityMismatch,
                      node.function + " expects " +
                          std::to_string(fn->arity) + " arguments, got " +
                          std::to_string(node.args.size()),
                      expr.offset);
          std::vector<Value> args;
          args.reserve(node.args.size());
          for (const ExprPtr& arg : node.args)
            args.push_back(evaluate(*arg, ctx));
          return fn->fn(args);
        }
      },
      expr.node);
}

// --------------------------------------------------------------------------
// Pretty-printer
// --------------------------------------------------------------------------

namespace {

const char* binary_op_lexeme(BinaryOp op) {
  switch (op) {
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

void print_to(const Expr& expr, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          out += to_display_string(node.value);
        } else if constexpr (std::is_same_v<T, Expr::Identifier>) {
          out += node.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          out += '(';
          out += node.op == UnaryOp::Not ? "not " : "-";
          print_to(*node.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          out += '(';
          print_to(*node.lhs, out);
          out += ' ';
          out += binary_op_lexeme(node.op);
          out += ' ';
          print_to(*node.rhs, out);
          out += ')';
        } else {  // Expr::Call
          out += node.function;
          out += '(';
          bool first = true;
          for (const ExprPtr& arg : node.args) {
            if (!first) out += ", ";
            first = false;
            print_to(*arg, out);
          }
          out += ')';
        }
      },
      expr.node);
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::string out;
  print_to(expr, out);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, Expr::Identifier>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return na.op == nb.op && expr_equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return na.op == nb.op && expr_equal(*na.lhs, *nb.lhs) &&
                 expr_equal(*na.rhs, *nb.rhs);
        } else {  // Expr::Call
          if (na.function != nb.function || na.args.size() != nb.args.size())
            return false;
          for (std::size_t i = 0; i < na.args.size(); ++i)
            if (!expr_equal(*na.args[i], *nb.args[i])) return false;
          return true;
        }
      },
      a.node);
}

}  // namespace normsim

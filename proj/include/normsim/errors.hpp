#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace normsim {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Lexical error in a condition source string. offset is the byte position
// of the offending character.
struct LexError : Error {
  LexError(std::string msg, std::size_t offset)
      : Error(std::move(msg)), offset(offset) {}
  std::size_t offset;
};

struct ParseError : Error {
  ParseError(std::string msg, std::size_t offset)
      : Error(std::move(msg)), offset(offset) {}
  std::size_t offset;
};

enum class EvalErrorKind {
  UnresolvedIdentifier,
  TypeMismatch,
  UnknownFunction,
  ArityMismatch,
  DivisionByZero,
};

struct EvaluationError : Error {
  EvaluationError(EvalErrorKind kind, std::string msg, std::size_t offset)
      : Error(std::move(msg)), kind(kind), offset(offset) {}
  EvalErrorKind kind;
  std::size_t offset;
  // Set by the engine when the error arose while evaluating a norm.
  std::string norm_id;
};

struct ModeConflictError : Error {
  using Error::Error;
};
struct DuplicateIdError : Error {
  using Error::Error;
};
struct DuplicateActionError : Error {
  using Error::Error;
};

struct UnknownRoleError : Error {
  using Error::Error;
};
struct AlreadyMemberError : Error {
  using Error::Error;
};
struct NotMemberError : Error {
  using Error::Error;
};
struct IssuerError : Error {
  using Error::Error;
};

struct DuplicateAgentError : Error {
  using Error::Error;
};
struct UnknownAgentError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};

// Aggregated load/validation failure; one diagnostic per problem.
struct ValidationError : Error {
  ValidationError(std::string msg, std::vector<std::string> diagnostics)
      : Error(std::move(msg)), diagnostics(std::move(diagnostics)) {}
  std::vector<std::string> diagnostics;
};

}  // namespace normsim

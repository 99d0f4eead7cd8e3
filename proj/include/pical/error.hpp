#ifndef PICAL_ERROR_HPP
#define PICAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pical {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value stored in an AST node or context violated a construction invariant.
struct InvariantError : Error {
  using Error::Error;
};

struct AlgebraLawError : Error {
  using Error::Error;
};

struct UnknownAlgebraError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::string msg, std::size_t line, std::size_t column)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct ScopeError : Error {
  ScopeError(std::string name, std::string where)
      : Error("unbound name '" + name + "' at " + where), name(std::move(name)), where(std::move(where)) {}
  std::string name;
  std::string where;
};

struct TypeError : Error {
  enum class Kind {
    IndexOutOfRange,
    AlgebraMismatch,
    SplitUndefined,
    NotAChannel,
    PayloadTypeMismatch,
    ResidualUsage,
    DepthMismatch,
  };
  TypeError(Kind kind, std::string msg, std::string path = "")
      : Error(path.empty() ? msg : msg + " (at " + path + ")"), kind(kind), path(std::move(path)) {}
  Kind kind;
  std::string path;
};

struct RewriteError : Error {
  enum class Kind { ShapeMismatch, UnusedViolation, PathUnresolved };
  RewriteError(Kind kind, std::string msg) : Error(std::move(msg)), kind(kind) {}
  Kind kind;
};

struct MetaError : Error {
  enum class Kind {
    EvidenceMismatch,
    FrameUndefined,
    UsedVariable,
    StepNotDerivable,
    MissingCapability,
    NoCapability,
  };
  MetaError(Kind kind, std::string msg) : Error(std::move(msg)), kind(kind) {}
  Kind kind;
};

}  // namespace pical

#endif

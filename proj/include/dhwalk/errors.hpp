#pragma once

#include <stdexcept>
#include <string>

namespace dhwalk {

/// Base of every error the engine raises. `kind()` is a stable short code
/// used in reports and CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DHWALK_DEFINE_ERROR(Name, code)                                     \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(code, what) {}           \
  };

DHWALK_DEFINE_ERROR(DimensionError, "dimension")
DHWALK_DEFINE_ERROR(DomainError, "domain")
DHWALK_DEFINE_ERROR(UnsupportedMove, "unsupported-move")
DHWALK_DEFINE_ERROR(InvalidBlowDown, "invalid-blow-down")
DHWALK_DEFINE_ERROR(SearchExhausted, "search-exhausted")
DHWALK_DEFINE_ERROR(UnsupportedExtremum, "unsupported-extremum")
DHWALK_DEFINE_ERROR(InconsistentData, "inconsistent-data")
DHWALK_DEFINE_ERROR(WallMismatch, "wall-mismatch")
DHWALK_DEFINE_ERROR(EulerInconsistency, "euler-inconsistency")
DHWALK_DEFINE_ERROR(NonSimpleRequired, "non-simple-required")
DHWALK_DEFINE_ERROR(GluingError, "gluing")
DHWALK_DEFINE_ERROR(PreconditionError, "precondition")
DHWALK_DEFINE_ERROR(InvalidLattice, "invalid-lattice")
DHWALK_DEFINE_ERROR(ModeError, "mode")
/// Raised when an internal invariant fails. Always a bug.
DHWALK_DEFINE_ERROR(InvariantBreach, "invariant-breach")

#undef DHWALK_DEFINE_ERROR

/// Parse/schema failure with a 1-based source position when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error("parse", line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A walk error annotated with the wall at which it happened.
class WalkError : public Error {
 public:
  WalkError(const Error& cause, std::string wall)
      : Error(cause.kind(), "at wall " + wall + ": " + cause.what()), wall_(std::move(wall)) {}
  const std::string& wall() const noexcept { return wall_; }

 private:
  std::string wall_;
};

inline void ensure_invariant(bool condition, const std::string& what) {
  if (!condition) throw InvariantBreach(what);
}

}  // namespace dhwalk

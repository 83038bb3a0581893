#pragma once

#include <stdexcept>
#include <string>

namespace normcomb {

enum class ErrorKind {
  MixedGroups,
  UnknownLabel,
  ZeroScalar,
  ContradictionFound,
  InconsistentHypotheses,
  UnknownTheorem,
  PrecisionExhausted,
  DivisionByZero,
  OracleMismatch,
  TrivialClass,
  MissingFact,
  Overflow,
  Parse,
  InvalidArgument,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace normcomb

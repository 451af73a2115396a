#pragma once

#include <stdexcept>
#include <string>

namespace ddn {

enum class ErrorKind {
  UndeclaredSymbol,
  SingularSample,
  NonEvaluable,
  DomainError,
  NotSolvable,
  OverlappingLeaders,
  NonTerminating,
  StructureViolation,
  NotVariational,
  DecompositionIncomplete,
  NotLinearHomogeneous,
  RelationNonzero,
  SamplingDegenerate,
  SyntaxError,
  ArityError,
  Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace ddn

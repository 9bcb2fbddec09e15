#pragma once

#include <stdexcept>
#include <string>

namespace hintelab {

enum class ErrorKind {
  ScopeViolation,
  TypeMismatch,
  UnboundName,
  FuelExhausted,
  NotAnInstance,
  AlreadyDeclared,
  UnifyFail,
  OccursCheck,
  DepthExceeded,
  NonlinearPattern,
  NotAcceptable,
  IllTyped,
  InvalidArgIndex,
  DuplicateCoercion,
  NoCoercion,
  NoMatch,
  UnsolvedObligation,
  SyntaxError,
  Internal,
};

const char* to_string(ErrorKind k);

struct SourcePos {
  int line = 0;
  int column = 0;
  bool known() const { return line > 0; }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourcePos pos = {})
      : std::runtime_error(message), kind_(kind), pos_(pos) {}

  ErrorKind kind() const { return kind_; }
  const SourcePos& pos() const { return pos_; }
  void set_pos(SourcePos p) {
    if (!pos_.known()) pos_ = p;
  }

 private:
  ErrorKind kind_;
  SourcePos pos_;
};

}  // namespace hintelab

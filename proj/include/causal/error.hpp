#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causal {

enum class ErrorKind {
  MissingField,
  TypeMismatch,
  UnsampleableField,
  SchemaMismatch,
  EvalError,
  RandomError,
  NoApplicableLaw,
  MultipleApplicable,
  SolveError,
  MissingAttribute,
  ZeroNorm,
  PositionOutOfBins,
  UnknownModel,
  BadParam,
  ContinuousRandomNotBranchable,
  UnknownObservable,
  SinkError,
  UnknownIntrinsic,
  NoValidInStateFound,
  InvalidArgument,
};

std::string_view toString(ErrorKind kind);

// Base of every error raised by the toolkit. `subject` names the offending
// field, law, attribute or model when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string subject = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorKind kind_;
  std::string subject_;
};

}  // namespace causal

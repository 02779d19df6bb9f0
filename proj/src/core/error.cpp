#include "causal/error.hpp"

namespace causal {

std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnsampleableField: return "UnsampleableField";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::RandomError: return "RandomError";
    case ErrorKind::NoApplicableLaw: return "NoApplicableLaw";
    case ErrorKind::MultipleApplicable: return "MultipleApplicable";
    case ErrorKind::SolveError: return "SolveError";
    case ErrorKind::MissingAttribute: return "MissingAttribute";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::PositionOutOfBins: return "PositionOutOfBins";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::BadParam: return "BadParam";
    case ErrorKind::ContinuousRandomNotBranchable: return "ContinuousRandomNotBranchable";
    case ErrorKind::UnknownObservable: return "UnknownObservable";
    case ErrorKind::SinkError: return "SinkError";
    case ErrorKind::UnknownIntrinsic: return "UnknownIntrinsic";
    case ErrorKind::NoValidInStateFound: return "NoValidInStateFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Error::Error(ErrorKind kind, std::string message, std::string subject)
    : std::runtime_error(std::move(message)), kind_(kind), subject_(std::move(subject)) {}

}  // namespace causal

#include "qresp/error.h"

namespace qresp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kContract: return "contract-violation";
    case ErrorCode::kConfig: return "configuration";
    case ErrorCode::kInstanceSize: return "instance-size";
    case ErrorCode::kInvalidChoice: return "invalid-choice";
    case ErrorCode::kState: return "state";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kDegenerateVector: return "degenerate-vector";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace qresp

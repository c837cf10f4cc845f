#ifndef QRESP_ERROR_H_
#define QRESP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qresp {

enum class ErrorCode {
  kParse,
  kCycle,
  kNotFound,
  kContract,
  kConfig,
  kInstanceSize,
  kInvalidChoice,
  kState,
  kDomain,
  kPrecondition,
  kAlignment,
  kDegenerateVector,
  kEmptyInput,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a machine-readable code so that
// front ends (CLI exit status, HTTP status) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qresp

#endif  // QRESP_ERROR_H_

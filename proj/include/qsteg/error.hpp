#pragma once

#include <stdexcept>
#include <string>

namespace qsteg {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kMalformedHeader,
  kUnsupportedBitDepth,
  kTruncatedData,
  kIo,
  kCapacityExceeded,
  kUncorrectableBlock,
  kCrcMismatch,
  kMissingCalibration,
  kInsufficientSamples,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a code so the C layer can map
// it onto a stable status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsteg

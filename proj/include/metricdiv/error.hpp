#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metricdiv {

enum class ErrorCode {
  NotSquare,
  NonFinite,
  Asymmetric,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  TriangleViolation,
  LabelMismatch,
  NonpositiveScale,
  DuplicatePoints,
  DimensionMismatch,
  UnknownMetric,
  InvalidProbability,
  NegativeAlpha,
  Singular,
  TooLarge,
  NoPositiveSubset,
  NonConvergence,
  EmptySet,
  InvalidSet,
  InvalidGrid,
  LambdaOutOfRange,
  IndexOutOfRange,
  InvalidPartition,
  InvalidMixture,
  ZeroMassSubset,
  InvalidBasepoint,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception. The witness holds
// whatever indices identify the offending entry (e.g. the i, k, j of a
// triangle violation d(i,k) > d(i,j) + d(j,k)).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::size_t> witness = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> witness_;
};

}  // namespace metricdiv

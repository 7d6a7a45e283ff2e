#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mpcf {

enum class ErrorCode {
  Empty,
  NonZeroStart,
  NonIncreasingTimes,
  NonFinite,
  NegativeTime,
  InvalidBounds,
  DivergentIntegral,
  MixedPrecision,
  EmptyCollection,
  InsufficientData,
  ZeroExtent,
  OutOfBounds,
  InvalidStep,
  ShapeMismatch,
  BadDimension,
  BadShape,
  Cancelled,
  Parse,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `row` is set for per-row validation
/// errors, `pair` for pairwise jobs that failed on a specific (i, j) entry.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the leading error-code name.
  const std::string& detail() const noexcept { return detail_; }

  std::optional<std::size_t> row() const noexcept { return row_; }
  Error& with_row(std::size_t row);

  struct PairIndex {
    std::size_t i;
    std::size_t j;
  };
  std::optional<PairIndex> pair() const noexcept { return pair_; }
  Error& with_pair(std::size_t i, std::size_t j);

private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> row_;
  std::optional<PairIndex> pair_;
};

} // namespace mpcf

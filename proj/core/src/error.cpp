#include "masspcf/error.hpp"

namespace mpcf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::Empty: return "Empty";
  case ErrorCode::NonZeroStart: return "NonZeroStart";
  case ErrorCode::NonIncreasingTimes: return "NonIncreasingTimes";
  case ErrorCode::NonFinite: return "NonFinite";
  case ErrorCode::NegativeTime: return "NegativeTime";
  case ErrorCode::InvalidBounds: return "InvalidBounds";
  case ErrorCode::DivergentIntegral: return "DivergentIntegral";
  case ErrorCode::MixedPrecision: return "MixedPrecision";
  case ErrorCode::EmptyCollection: return "EmptyCollection";
  case ErrorCode::InsufficientData: return "InsufficientData";
  case ErrorCode::ZeroExtent: return "ZeroExtent";
  case ErrorCode::OutOfBounds: return "OutOfBounds";
  case ErrorCode::InvalidStep: return "InvalidStep";
  case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  case ErrorCode::BadDimension: return "BadDimension";
  case ErrorCode::BadShape: return "BadShape";
  case ErrorCode::Cancelled: return "Cancelled";
  case ErrorCode::Parse: return "Parse";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

Error& Error::with_row(std::size_t row) {
  row_ = row;
  return *this;
}

Error& Error::with_pair(std::size_t i, std::size_t j) {
  pair_ = PairIndex{i, j};
  return *this;
}

} // namespace mpcf

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "masspcf/pcf.hpp"

namespace mpcf {

/// A PCF whose scalar kind is known only at run time (e.g. read from a file).
using AnyPcf = std::variant<Pcf32, Pcf64>;

/// A collection of one scalar kind.
using AnyCollection = std::variant<std::vector<Pcf32>, std::vector<Pcf64>>;

const char* dtype_of(const AnyPcf& f) noexcept;
const char* dtype_of(const AnyCollection& c) noexcept;
std::size_t size_of(const AnyCollection& c) noexcept;

/// Groups run-time typed PCFs into a single-kind collection. Throws
/// EmptyCollection for no input and MixedPrecision when kinds differ; values
/// are never converted between kinds.
AnyCollection make_collection(std::span<const AnyPcf> pcfs);

/// Pointwise sum; MixedPrecision when the operands differ in scalar kind.
AnyPcf add(const AnyPcf& f, const AnyPcf& g);

} // namespace mpcf

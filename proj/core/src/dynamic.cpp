#include "masspcf/dynamic.hpp"

#include <string>

namespace mpcf {

const char* dtype_of(const AnyPcf& f) noexcept {
  return std::holds_alternative<Pcf32>(f) ? dtype_name<float>() : dtype_name<double>();
}

const char* dtype_of(const AnyCollection& c) noexcept {
  return std::holds_alternative<std::vector<Pcf32>>(c) ? dtype_name<float>() : dtype_name<double>();
}

std::size_t size_of(const AnyCollection& c) noexcept {
  return std::visit([](const auto& v) { return v.size(); }, c);
}

namespace {

template <Scalar T>
std::vector<Pcf<T>> gather(std::span<const AnyPcf> pcfs) {
  std::vector<Pcf<T>> out;
  out.reserve(pcfs.size());
  for (std::size_t i = 0; i < pcfs.size(); ++i) {
    const auto* f = std::get_if<Pcf<T>>(&pcfs[i]);
    if (f == nullptr) {
      throw Error(ErrorCode::MixedPrecision, "PCF " + std::to_string(i) + " is " + dtype_of(pcfs[i]) +
                                                 " but the collection is " + dtype_name<T>())
          .with_row(i);
    }
    out.push_back(*f);
  }
  return out;
}

} // namespace

AnyCollection make_collection(std::span<const AnyPcf> pcfs) {
  if (pcfs.empty()) {
    throw Error(ErrorCode::EmptyCollection, "no PCFs given");
  }
  if (std::holds_alternative<Pcf32>(pcfs.front())) {
    return gather<float>(pcfs);
  }
  return gather<double>(pcfs);
}

AnyPcf add(const AnyPcf& f, const AnyPcf& g) {
  if (f.index() != g.index()) {
    throw Error(ErrorCode::MixedPrecision,
                std::string("cannot add ") + dtype_of(f) + " and " + dtype_of(g) + " PCFs");
  }
  return std::visit(
      [&g](const auto& lhs) -> AnyPcf {
        using P = std::decay_t<decltype(lhs)>;
        return add(lhs, std::get<P>(g));
      },
      f);
}

} // namespace mpcf

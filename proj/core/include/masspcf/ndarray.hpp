#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "masspcf/error.hpp"
#include "masspcf/executor.hpp"
#include "masspcf/pcf.hpp"
#include "masspcf/reduce.hpp"

namespace mpcf {

class Shape {
public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> extents) : extents_(extents) {}
  explicit Shape(std::vector<std::size_t> extents) : extents_(std::move(extents)) {}

  std::size_t rank() const noexcept { return extents_.size(); }
  std::size_t operator[](std::size_t dim) const { return extents_.at(dim); }
  const std::vector<std::size_t>& extents() const noexcept { return extents_; }

  std::size_t element_count() const noexcept {
    std::size_t n = 1;
    for (auto e : extents_) {
      n *= e;
    }
    return n;
  }

  /// "Shape(10, 5, 4)"
  std::string to_string() const {
    std::string s = "Shape(";
    for (std::size_t i = 0; i < extents_.size(); ++i) {
      s += (i ? ", " : "") + std::to_string(extents_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const Shape&, const Shape&) = default;

private:
  std::vector<std::size_t> extents_;
};

/// start:stop:step along one dimension; stop defaults to the extent and is
/// clamped to it. Negative values are rejected.
struct Range {
  std::ptrdiff_t start = 0;
  std::optional<std::ptrdiff_t> stop;
  std::ptrdiff_t step = 1;
};

inline Range all() { return {}; }

/// An integer index (drops the dimension) or a Range (keeps it).
using SliceSpec = std::variant<std::ptrdiff_t, Range>;

template <Scalar T>
class PcfArray;

/// Strided window onto a PcfArray's storage. Views share the storage and never
/// copy elements; writes through a view are visible through the parent and
/// through every overlapping view.
template <Scalar T>
class PcfView {
public:
  PcfView(std::shared_ptr<std::vector<Pcf<T>>> storage, std::size_t offset, std::vector<std::size_t> extents,
          std::vector<std::size_t> strides)
      : storage_(std::move(storage)), offset_(offset), shape_(std::move(extents)), strides_(std::move(strides)) {}

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  std::size_t size() const noexcept { return shape_.element_count(); }

  const Pcf<T>& at(std::initializer_list<std::size_t> index) const {
    return (*storage_)[storage_index(std::vector<std::size_t>(index))];
  }
  const Pcf<T>& at(const std::vector<std::size_t>& index) const { return (*storage_)[storage_index(index)]; }

  void set(const std::vector<std::size_t>& index, Pcf<T> value) { (*storage_)[storage_index(index)] = std::move(value); }

  PcfView slice(const std::vector<SliceSpec>& specs) const {
    if (specs.size() > rank()) {
      throw Error(ErrorCode::OutOfBounds, "more slice specs than dimensions");
    }
    std::size_t offset = offset_;
    std::vector<std::size_t> extents;
    std::vector<std::size_t> strides;
    for (std::size_t d = 0; d < rank(); ++d) {
      const std::size_t extent = shape_[d];
      const SliceSpec spec = d < specs.size() ? specs[d] : SliceSpec(all());
      if (const auto* index = std::get_if<std::ptrdiff_t>(&spec)) {
        if (*index < 0 || static_cast<std::size_t>(*index) >= extent) {
          throw Error(ErrorCode::OutOfBounds, "index " + std::to_string(*index) + " outside extent " +
                                                  std::to_string(extent) + " of dimension " + std::to_string(d));
        }
        offset += static_cast<std::size_t>(*index) * strides_[d];
        continue;
      }
      const Range& r = std::get<Range>(spec);
      if (r.step <= 0) {
        throw Error(ErrorCode::InvalidStep, "slice step must be positive");
      }
      const std::ptrdiff_t stop_raw = r.stop.value_or(static_cast<std::ptrdiff_t>(extent));
      if (r.start < 0 || stop_raw < 0 || static_cast<std::size_t>(r.start) > extent) {
        throw Error(ErrorCode::OutOfBounds, "range outside extent " + std::to_string(extent) + " of dimension " +
                                                std::to_string(d));
      }
      const auto start = static_cast<std::size_t>(r.start);
      const std::size_t stop = std::min(extent, static_cast<std::size_t>(stop_raw));
      const auto step = static_cast<std::size_t>(r.step);
      extents.push_back(stop > start ? (stop - start + step - 1) / step : 0);
      strides.push_back(strides_[d] * step);
      offset += start * strides_[d];
    }
    return PcfView(storage_, offset, std::move(extents), std::move(strides));
  }

  PcfView operator()(std::initializer_list<SliceSpec> specs) const { return slice(std::vector<SliceSpec>(specs)); }

  /// Elements in row-major order of this view.
  std::vector<Pcf<T>> elements() const {
    std::vector<Pcf<T>> out;
    out.reserve(size());
    for_each_offset([&](std::size_t off) { out.push_back((*storage_)[off]); });
    return out;
  }

  /// Replaces the addressed elements with those of `source` (same shape).
  /// Source handles are read in full before any write, so overlapping views
  /// of one array behave like a copy.
  void assign(const PcfView& source) {
    if (source.shape() != shape()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "cannot assign " + source.shape().to_string() + " into " + shape().to_string());
    }
    std::vector<Pcf<T>> values = source.elements();
    std::size_t k = 0;
    for_each_offset([&](std::size_t off) { (*storage_)[off] = values[k++]; });
  }

  void assign(const PcfArray<T>& source);

  PcfArray<T> to_array() const;

  template <class Fn>
  void for_each_offset(Fn&& fn) const {
    if (size() == 0) {
      return;
    }
    std::vector<std::size_t> index(rank(), 0);
    std::size_t off = offset_;
    for (;;) {
      fn(off);
      std::size_t d = rank();
      for (;;) {
        if (d == 0) {
          return;
        }
        --d;
        if (++index[d] < shape_[d]) {
          off += strides_[d];
          break;
        }
        off -= (shape_[d] - 1) * strides_[d];
        index[d] = 0;
      }
    }
  }

  std::size_t offset() const noexcept { return offset_; }

  /// Same storage and offset with different extents/strides (no checks).
  PcfView restrided(std::vector<std::size_t> extents, std::vector<std::size_t> strides) const {
    return PcfView(storage_, offset_, std::move(extents), std::move(strides));
  }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }

private:
  std::size_t storage_index(const std::vector<std::size_t>& index) const {
    if (index.size() != rank()) {
      throw Error(ErrorCode::OutOfBounds, "expected " + std::to_string(rank()) + " indices");
    }
    std::size_t off = offset_;
    for (std::size_t d = 0; d < rank(); ++d) {
      if (index[d] >= shape_[d]) {
        throw Error(ErrorCode::OutOfBounds, "index " + std::to_string(index[d]) + " outside extent " +
                                                std::to_string(shape_[d]));
      }
      off += index[d] * strides_[d];
    }
    return off;
  }

  std::shared_ptr<std::vector<Pcf<T>>> storage_;
  std::size_t offset_;
  Shape shape_;
  std::vector<std::size_t> strides_;
};

/// Row-major multidimensional array of PCF handles.
template <Scalar T>
class PcfArray {
public:
  /// 1-D array over the given PCFs.
  explicit PcfArray(std::vector<Pcf<T>> elements) : shape_({elements.size()}) {
    storage_ = std::make_shared<std::vector<Pcf<T>>>(std::move(elements));
  }

  PcfArray(Shape shape, std::vector<Pcf<T>> elements) : shape_(std::move(shape)) {
    if (shape_.element_count() != elements.size()) {
      throw Error(ErrorCode::ShapeMismatch, shape_.to_string() + " does not hold " + std::to_string(elements.size()) +
                                                " elements");
    }
    storage_ = std::make_shared<std::vector<Pcf<T>>>(std::move(elements));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  std::size_t size() const noexcept { return storage_->size(); }
  const std::vector<Pcf<T>>& elements() const noexcept { return *storage_; }

  PcfView<T> view() const { return PcfView<T>(storage_, 0, shape_.extents(), row_major_strides()); }

  const Pcf<T>& at(std::initializer_list<std::size_t> index) const { return view().at(index); }
  void set(const std::vector<std::size_t>& index, Pcf<T> value) { view().set(index, std::move(value)); }

  PcfView<T> operator()(std::initializer_list<SliceSpec> specs) const { return view()(specs); }
  PcfView<T> slice(const std::vector<SliceSpec>& specs) const { return view().slice(specs); }

private:
  std::vector<std::size_t> row_major_strides() const {
    std::vector<std::size_t> strides(rank(), 1);
    for (std::size_t d = rank(); d-- > 1;) {
      strides[d - 1] = strides[d] * shape_[d];
    }
    return strides;
  }

  Shape shape_;
  std::shared_ptr<std::vector<Pcf<T>>> storage_;
};

template <Scalar T>
void PcfView<T>::assign(const PcfArray<T>& source) {
  assign(source.view());
}

template <Scalar T>
PcfArray<T> PcfView<T>::to_array() const {
  return PcfArray<T>(shape_, elements());
}

/// Array of the given shape filled with zero PCFs.
template <Scalar T = double>
PcfArray<T> zeros(const Shape& shape) {
  if (shape.rank() == 0) {
    throw Error(ErrorCode::BadShape, "zeros needs at least one dimension");
  }
  for (auto e : shape.extents()) {
    if (e == 0) {
      throw Error(ErrorCode::ZeroExtent, shape.to_string() + " has a zero extent");
    }
  }
  return PcfArray<T>(shape, std::vector<Pcf<T>>(shape.element_count()));
}

/// Mean of every fiber along `dim`; the dimension is removed from the result.
template <Scalar T>
PcfArray<T> mean_along(const PcfView<T>& input, std::size_t dim, unsigned workers = 1) {
  if (dim >= input.rank()) {
    throw Error(ErrorCode::BadDimension,
                "dimension " + std::to_string(dim) + " out of range for rank " + std::to_string(input.rank()));
  }
  std::vector<std::size_t> out_extents;
  for (std::size_t d = 0; d < input.rank(); ++d) {
    if (d != dim) {
      out_extents.push_back(input.shape()[d]);
    }
  }
  const Shape out_shape(out_extents);
  const std::size_t outputs = out_shape.element_count();

  // Re-stride the view with the reduced dimension moved last; every run of
  // `fiber` consecutive elements in row-major order is then one fiber.
  std::vector<std::size_t> extents = out_extents;
  extents.push_back(input.shape()[dim]);
  std::vector<std::size_t> strides;
  for (std::size_t d = 0; d < input.rank(); ++d) {
    if (d != dim) {
      strides.push_back(input.strides()[d]);
    }
  }
  strides.push_back(input.strides()[dim]);
  const std::vector<Pcf<T>> ordered = input.restrided(std::move(extents), std::move(strides)).elements();

  const std::size_t fiber = input.shape()[dim];
  std::vector<Pcf<T>> out(outputs);
  run_blocks(outputs, resolve_workers(workers), [&](std::size_t o, unsigned) {
    out[o] = mean(std::span<const Pcf<T>>(ordered.data() + o * fiber, fiber));
  });
  return PcfArray<T>(out_shape, std::move(out));
}

template <Scalar T>
PcfArray<T> mean_along(const PcfArray<T>& input, std::size_t dim, unsigned workers = 1) {
  return mean_along(input.view(), dim, workers);
}

} // namespace mpcf

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "masspcf/error.hpp"

namespace mpcf {

template <class T>
concept Scalar = std::same_as<T, float> || std::same_as<T, double>;

template <Scalar T>
constexpr const char* dtype_name() noexcept {
  return std::same_as<T, float> ? "float32" : "float64";
}

/// Read-only (rows x 2) row-major view over a PCF's time/value storage.
template <Scalar T>
class MatrixView {
public:
  static constexpr std::size_t cols = 2;

  MatrixView(const T* data, std::size_t rows) noexcept : data_(data), rows_(rows) {}

  std::size_t rows() const noexcept { return rows_; }
  const T* data() const noexcept { return data_; }
  std::span<const T> flat() const noexcept { return {data_, rows_ * cols}; }
  T operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * cols + col]; }

private:
  const T* data_;
  std::size_t rows_;
};

namespace detail {

// Validates an interleaved [t0, v0, t1, v1, ...] buffer.
template <Scalar T>
void validate_points(std::span<const T> interleaved) {
  if (interleaved.empty()) {
    throw Error(ErrorCode::Empty, "a PCF needs at least one (time, value) row");
  }
  const std::size_t rows = interleaved.size() / 2;
  for (std::size_t i = 0; i < rows; ++i) {
    const T t = interleaved[2 * i];
    const T v = interleaved[2 * i + 1];
    if (!std::isfinite(t) || !std::isfinite(v)) {
      throw Error(ErrorCode::NonFinite, "row " + std::to_string(i) + " holds a NaN or infinite entry")
          .with_row(i);
    }
    if (i == 0 && t != T(0)) {
      throw Error(ErrorCode::NonZeroStart, "first time point must be 0").with_row(0);
    }
    if (i > 0 && !(interleaved[2 * (i - 1)] < t)) {
      throw Error(ErrorCode::NonIncreasingTimes,
                  "row " + std::to_string(i) + " has a time not greater than its predecessor")
          .with_row(i);
    }
  }
}

} // namespace detail

/// Right-continuous step function on [0, inf), stored as an (n x 2) matrix of
/// (time, value) rows. Copies share the immutable point buffer.
template <Scalar T>
class Pcf {
public:
  using value_type = T;
  using Buffer = std::vector<T>;

  /// The zero PCF [(0, 0)].
  Pcf() : buf_(zero_buffer()) {}

  Pcf(std::initializer_list<std::array<T, 2>> rows)
      : Pcf(from_rows(std::span<const std::array<T, 2>>(rows.begin(), rows.size()))) {}

  static Pcf from_rows(std::span<const std::array<T, 2>> rows) {
    Buffer buf;
    buf.reserve(rows.size() * 2);
    for (const auto& r : rows) {
      buf.push_back(r[0]);
      buf.push_back(r[1]);
    }
    return from_interleaved(std::move(buf));
  }

  /// Takes ownership of an interleaved [t0, v0, t1, v1, ...] buffer after validation.
  static Pcf from_interleaved(Buffer buf) {
    if (buf.size() % 2 != 0) {
      throw Error(ErrorCode::Parse, "interleaved point buffer has odd length");
    }
    detail::validate_points<T>(buf);
    return Pcf(std::make_shared<const Buffer>(std::move(buf)));
  }

  /// For buffers produced by algorithms that already guarantee the invariants.
  static Pcf from_trusted(Buffer buf) { return Pcf(std::make_shared<const Buffer>(std::move(buf))); }

  static Pcf zero() { return Pcf(); }

  std::size_t size() const noexcept { return buf_->size() / 2; }
  T time(std::size_t i) const noexcept { return (*buf_)[2 * i]; }
  T value(std::size_t i) const noexcept { return (*buf_)[2 * i + 1]; }
  const T* data() const noexcept { return buf_->data(); }
  std::span<const T> interleaved() const noexcept { return *buf_; }

  MatrixView<T> matrix() const noexcept { return {buf_->data(), size()}; }

  bool is_zero() const noexcept { return size() == 1 && value(0) == T(0); }

  /// Same stored rows (not merely evaluate-equal).
  friend bool operator==(const Pcf& a, const Pcf& b) noexcept {
    return a.buf_ == b.buf_ || *a.buf_ == *b.buf_;
  }

private:
  explicit Pcf(std::shared_ptr<const Buffer> buf) : buf_(std::move(buf)) {}

  static std::shared_ptr<const Buffer> zero_buffer() {
    static const auto zero = std::make_shared<const Buffer>(Buffer{T(0), T(0)});
    return zero;
  }

  std::shared_ptr<const Buffer> buf_;
};

using Pcf32 = Pcf<float>;
using Pcf64 = Pcf<double>;

template <Scalar T>
Pcf<T> make_pcf(std::span<const std::array<T, 2>> rows) {
  return Pcf<T>::from_rows(rows);
}

template <Scalar T>
Pcf<T> make_pcf(std::initializer_list<std::array<T, 2>> rows) {
  return Pcf<T>(rows);
}

/// Zero-copy, read-only export of the (time, value) rows.
template <Scalar T>
MatrixView<T> export_matrix(const Pcf<T>& f) noexcept {
  return f.matrix();
}

namespace detail {

// Largest i < n with points[2 * i] <= t, for an interleaved point buffer.
template <Scalar T>
std::size_t piece_index(const T* points, std::size_t n, T t) noexcept {
  std::size_t lo = 0;
  std::size_t hi = n;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (points[2 * mid] <= t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

} // namespace detail

/// Index of the piece containing t: the largest i with time(i) <= t.
template <Scalar T>
std::size_t piece_index(const Pcf<T>& f, T t) noexcept {
  return detail::piece_index(f.data(), f.size(), t);
}

template <Scalar T>
T evaluate(const Pcf<T>& f, T t) {
  if (!(t >= T(0)) || !std::isfinite(t)) {
    throw Error(ErrorCode::NegativeTime, "evaluation time must be finite and nonnegative");
  }
  return f.value(piece_index(f, t));
}

/// Drops every interior point whose value equals the previous kept value.
template <Scalar T>
Pcf<T> minimize_discretization(const Pcf<T>& f) {
  const std::size_t n = f.size();
  std::size_t i = 1;
  while (i < n && f.value(i) != f.value(i - 1)) {
    ++i;
  }
  if (i == n) {
    return f;
  }
  typename Pcf<T>::Buffer out(f.interleaved().begin(), f.interleaved().begin() + 2 * i);
  T last = f.value(i - 1);
  for (; i < n; ++i) {
    if (f.value(i) != last) {
      out.push_back(f.time(i));
      out.push_back(f.value(i));
      last = f.value(i);
    }
  }
  return Pcf<T>::from_trusted(std::move(out));
}

/// h_*(f)(t) = h(f(t)); the result is minimally discretized.
template <Scalar T, class UnaryOp>
Pcf<T> apply_unary(const Pcf<T>& f, UnaryOp&& h) {
  typename Pcf<T>::Buffer out;
  out.reserve(2 * f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const T v = static_cast<T>(h(f.value(i)));
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFinite, "unary map produced a non-finite value on piece " + std::to_string(i))
          .with_row(i);
    }
    if (i == 0 || v != out.back()) {
      out.push_back(f.time(i));
      out.push_back(v);
    }
  }
  return Pcf<T>::from_trusted(std::move(out));
}

template <Scalar T>
Pcf<T> scale(const Pcf<T>& f, T a) {
  if (!std::isfinite(a)) {
    throw Error(ErrorCode::NonFinite, "scale factor must be finite");
  }
  if (a == T(0)) {
    return Pcf<T>::zero();
  }
  return apply_unary(f, [a](T v) { return v * a; });
}

/// Pointwise sum on the minimal common refinement, minimally discretized.
template <Scalar T>
Pcf<T> add(const Pcf<T>& f, const Pcf<T>& g);

/// Collapses rows sharing a time into one, keeping the last value given for
/// that time (the right-continuous reading of a zero-width piece). Rows must
/// already be sorted by time. The result still goes through validation.
template <Scalar T>
Pcf<T> merge_duplicate_times(std::span<const std::array<T, 2>> rows) {
  std::vector<std::array<T, 2>> merged;
  merged.reserve(rows.size());
  for (const auto& r : rows) {
    if (!merged.empty() && merged.back()[0] == r[0]) {
      merged.back()[1] = r[1];
    } else {
      merged.push_back(r);
    }
  }
  return Pcf<T>::from_rows(merged);
}

extern template Pcf<float> add(const Pcf<float>&, const Pcf<float>&);
extern template Pcf<double> add(const Pcf<double>&, const Pcf<double>&);

} // namespace mpcf

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "masspcf/error.hpp"
#include "masspcf/executor.hpp"
#include "masspcf/pcf.hpp"
#include "masspcf/sweep.hpp"

namespace mpcf {

struct Plus {
  template <Scalar T>
  T operator()(T a, T b) const noexcept { return a + b; }
};

struct Max {
  template <Scalar T>
  T operator()(T a, T b) const noexcept { return a < b ? b : a; }
};

struct Min {
  template <Scalar T>
  T operator()(T a, T b) const noexcept { return b < a ? b : a; }
};

namespace detail {

// Grows to at least `need` elements, at least doubling the capacity whenever
// a reallocation is unavoidable.
template <class V>
void ensure_size(V& buf, std::size_t need) {
  if (buf.capacity() < need) {
    buf.reserve(std::max(need, 2 * buf.capacity()));
  }
  buf.resize(need);
}

// Writes h_*(f, g) into `out` as interleaved points. One time point per cell
// left edge where the combined value changes (always at t = 0), then the
// buffer is truncated to the points actually written.
template <Scalar T, class Op>
void reduce_into(const T* fp, std::size_t nf, const T* gp, std::size_t ng, Op& h, std::vector<T>& out) {
  ensure_size(out, 2 * (nf + ng));
  std::size_t written = 0;
  T last = T(0);
  T* dst = out.data();
  sweep_rectangles(fp, nf, gp, ng, T(0), infinity<T>(), [&](const Rectangle<T>& rect) {
    const T v = static_cast<T>(h(rect.vf, rect.vg));
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFinite, "reduction produced a non-finite value");
    }
    if (rect.l == T(0) || v != last) {
      dst[2 * written] = rect.l;
      dst[2 * written + 1] = v;
      ++written;
    }
    last = v;
  });
  out.resize(2 * written);
}

} // namespace detail

/// h_*(f, g), minimally discretized; at most |f| + |g| points.
template <Scalar T, class Op>
Pcf<T> reduce_pair(const Pcf<T>& f, const Pcf<T>& g, Op&& h) {
  std::vector<T> out;
  detail::reduce_into(f.data(), f.size(), g.data(), g.size(), h, out);
  return Pcf<T>::from_trusted(std::move(out));
}

/// Mutable, double-buffered PCF state for in-place reductions. Each combine
/// writes into the side buffer and swaps it with the state in O(1).
///
/// A fresh accumulator reads as the zero PCF; its first combine adopts the
/// operand (minimally discretized) instead of reducing against zero, so ops
/// without an identity element (min, max) start correctly.
template <Scalar T, class Op = Plus>
class ReductionAccumulator {
public:
  explicit ReductionAccumulator(Op op = {}) : op_(std::move(op)) {}

  void combine(const Pcf<T>& g) { combine_points(g.data(), g.size()); }

  void combine(const ReductionAccumulator& other) {
    if (other.empty_) {
      return;
    }
    combine_points(other.state_.data(), other.state_.size() / 2);
  }

  bool empty() const noexcept { return empty_; }
  std::size_t size() const noexcept { return empty_ ? 1 : state_.size() / 2; }
  std::size_t capacity() const noexcept { return std::max(state_.capacity(), side_.capacity()); }

  Pcf<T> to_pcf() const {
    if (empty_) {
      return Pcf<T>::zero();
    }
    return Pcf<T>::from_trusted(state_);
  }

private:
  void combine_points(const T* gp, std::size_t ng) {
    if (empty_) {
      adopt(gp, ng);
      return;
    }
    detail::reduce_into(state_.data(), state_.size() / 2, gp, ng, op_, side_);
    std::swap(state_, side_);
  }

  void adopt(const T* gp, std::size_t ng) {
    detail::ensure_size(state_, 2 * ng);
    std::size_t written = 0;
    for (std::size_t i = 0; i < ng; ++i) {
      const T v = gp[2 * i + 1];
      if (i == 0 || v != state_[2 * written - 1]) {
        state_[2 * written] = gp[2 * i];
        state_[2 * written + 1] = v;
        ++written;
      }
    }
    state_.resize(2 * written);
    empty_ = false;
  }

  Op op_;
  std::vector<T> state_;
  std::vector<T> side_;
  bool empty_ = true;
};

/// Reduces a collection over a fixed binary tree: leaves are paired
/// (0,1)(2,3)..., an unpaired node passes through unchanged, and each level
/// pairs neighbouring columns again. The tree depends only on the collection
/// size, so the result is the same for any worker count.
template <Scalar T, class Op>
Pcf<T> tree_reduce(std::span<const Pcf<T>> collection, Op h, unsigned workers = 1) {
  const std::size_t m = collection.size();
  if (m == 0) {
    throw Error(ErrorCode::EmptyCollection, "cannot reduce an empty collection");
  }
  workers = resolve_workers(workers);

  const std::size_t columns = (m + 1) / 2;
  std::vector<ReductionAccumulator<T, Op>> acc(columns, ReductionAccumulator<T, Op>(h));

  run_blocks(columns, workers, [&](std::size_t c, unsigned) {
    acc[c].combine(collection[2 * c]);
    if (2 * c + 1 < m) {
      acc[c].combine(collection[2 * c + 1]);
    }
  });

  for (std::size_t stride = 1; stride < columns; stride *= 2) {
    const std::size_t merges = (columns + 2 * stride - 1) / (2 * stride);
    run_blocks(merges, workers, [&](std::size_t k, unsigned) {
      const std::size_t left = 2 * stride * k;
      if (left + stride < columns) {
        acc[left].combine(acc[left + stride]);
      }
    });
  }
  return acc.front().to_pcf();
}

template <Scalar T, class Op>
Pcf<T> tree_reduce(const std::vector<Pcf<T>>& collection, Op h, unsigned workers = 1) {
  return tree_reduce(std::span<const Pcf<T>>(collection), std::move(h), workers);
}

/// Pointwise average (1/n) * sum of the collection.
template <Scalar T>
Pcf<T> mean(std::span<const Pcf<T>> collection, unsigned workers = 1) {
  const Pcf<T> sum = tree_reduce(collection, Plus{}, workers);
  const T n = static_cast<T>(collection.size());
  return apply_unary(sum, [n](T v) { return v / n; });
}

template <Scalar T>
Pcf<T> mean(const std::vector<Pcf<T>>& collection, unsigned workers = 1) {
  return mean(std::span<const Pcf<T>>(collection), workers);
}

/// Divisor for the sum of squared deviations.
enum class VarianceDivisor {
  NMinusOne, ///< unbiased sample variance
  NPlusOne,
};

namespace detail {

/// Pointwise count, mean and sum of squared deviations of a subtree.
template <Scalar T>
struct Moments {
  Pcf<T> mean;
  Pcf<T> m2;
  std::size_t count = 0;
};

// Pairwise update of Chan, Golub and LeVeque. Where both sides have the same
// mean delta is exactly 0, so members that agree give m2 == 0 exactly.
template <Scalar T>
Moments<T> merge_moments(const Moments<T>& a, const Moments<T>& b) {
  const T n = static_cast<T>(a.count + b.count);
  const T wb = static_cast<T>(b.count) / n;
  const T w = static_cast<T>(a.count) * static_cast<T>(b.count) / n;
  const Pcf<T> delta = reduce_pair(b.mean, a.mean, [](T x, T y) { return x - y; });
  Moments<T> out;
  out.count = a.count + b.count;
  out.mean = reduce_pair(a.mean, delta, [wb](T m, T d) { return m + d * wb; });
  out.m2 = reduce_pair(reduce_pair(a.m2, b.m2, [](T x, T y) { return x + y; }), delta,
                       [w](T s, T d) { return s + d * d * w; });
  return out;
}

} // namespace detail

/// Pointwise (1/divisor) * sum_i (f_i - mean)^2. Moments are merged over the
/// same fixed tree as tree_reduce, so each node only lives on the grid of its
/// own subtree and the result does not depend on the worker count. Wherever
/// all members agree the result is exactly 0.
template <Scalar T>
Pcf<T> variance(std::span<const Pcf<T>> collection, VarianceDivisor divisor = VarianceDivisor::NMinusOne,
                unsigned workers = 1) {
  const std::size_t n = collection.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData, "sample variance needs at least two PCFs, got " + std::to_string(n));
  }
  workers = resolve_workers(workers);
  const std::size_t columns = (n + 1) / 2;
  std::vector<detail::Moments<T>> nodes(columns);
  run_blocks(columns, workers, [&](std::size_t c, unsigned) {
    detail::Moments<T> left{collection[2 * c], Pcf<T>::zero(), 1};
    nodes[c] = 2 * c + 1 < n ? detail::merge_moments(left, {collection[2 * c + 1], Pcf<T>::zero(), 1})
                             : std::move(left);
  });
  for (std::size_t stride = 1; stride < columns; stride *= 2) {
    const std::size_t merges = (columns + 2 * stride - 1) / (2 * stride);
    run_blocks(merges, workers, [&](std::size_t k, unsigned) {
      const std::size_t left = 2 * stride * k;
      if (left + stride < columns) {
        nodes[left] = detail::merge_moments(nodes[left], nodes[left + stride]);
        nodes[left + stride] = {};
      }
    });
  }
  const T d = static_cast<T>(divisor == VarianceDivisor::NMinusOne ? n - 1 : n + 1);
  return apply_unary(nodes.front().m2, [d](T ss) { return ss / d; });
}

/// Pointwise sample standard deviation, sqrt of variance().
template <Scalar T>
Pcf<T> stddev(std::span<const Pcf<T>> collection, VarianceDivisor divisor = VarianceDivisor::NMinusOne,
              unsigned workers = 1) {
  return apply_unary(variance(collection, divisor, workers), [](T v) { return std::sqrt(v); });
}

template <Scalar T>
Pcf<T> stddev(const std::vector<Pcf<T>>& collection, VarianceDivisor divisor = VarianceDivisor::NMinusOne,
              unsigned workers = 1) {
  return stddev(std::span<const Pcf<T>>(collection), divisor, workers);
}

} // namespace mpcf

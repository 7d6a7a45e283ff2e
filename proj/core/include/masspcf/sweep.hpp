#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "masspcf/error.hpp"
#include "masspcf/pcf.hpp"

namespace mpcf {

/// One cell [l, r) of the implicit common grid of two PCFs. r may be +inf.
template <Scalar T>
struct Rectangle {
  T l;
  T r;
  T vf;
  T vg;

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// One constant piece [l, r) of a single PCF clipped to the bounds.
template <Scalar T>
struct Segment {
  T l;
  T r;
  T v;

  friend bool operator==(const Segment&, const Segment&) = default;
};

template <Scalar T>
constexpr T infinity() noexcept {
  return std::numeric_limits<T>::infinity();
}

template <Scalar T>
void check_bounds(T a, T b) {
  if (!(a >= T(0)) || !std::isfinite(a) || !(a < b)) {
    throw Error(ErrorCode::InvalidBounds, "integration bounds must satisfy 0 <= a < b");
  }
}

namespace detail {

// Rectangle sweep over interleaved point buffers; bounds are not checked.
template <Scalar T, class Visit>
void sweep_rectangles(const T* fp, std::size_t nf, const T* gp, std::size_t ng, T a, T b, Visit&& visit) {
  constexpr T inf = infinity<T>();

  std::size_t k = a == T(0) ? 0 : piece_index(fp, nf, a);
  std::size_t kg = a == T(0) ? 0 : piece_index(gp, ng, a);
  T l = a;

  for (;;) {
    const T vf = fp[2 * k + 1];
    const T vg = gp[2 * kg + 1];
    const T next_f = k + 1 < nf ? fp[2 * (k + 1)] : inf;
    const T next_g = kg + 1 < ng ? gp[2 * (kg + 1)] : inf;
    const T next = next_f < next_g ? next_f : next_g;
    if (next >= b) {
      visit(Rectangle<T>{l, b, vf, vg});
      return;
    }
    visit(Rectangle<T>{l, next, vf, vg});
    k += next_f == next;
    kg += next_g == next;
    l = next;
  }
}

} // namespace detail

/// Two-cursor sweep over the minimal common refinement of f and g restricted
/// to [a, b). Calls visit(Rectangle) once per cell in increasing time order.
/// Edges are copied from the inputs or the bounds, never computed. When both
/// PCFs jump at the same time, both cursors advance together.
template <Scalar T, class Visit>
void iterate_rectangles(const Pcf<T>& f, const Pcf<T>& g, T a, T b, Visit&& visit) {
  check_bounds(a, b);
  detail::sweep_rectangles(f.data(), f.size(), g.data(), g.size(), a, b, visit);
}

/// Single-PCF analogue: visit(Segment) once per piece of f intersecting
/// [a, b), in order. Adjacent segments with equal values are not merged.
template <Scalar T, class Visit>
void iterate_segments(const Pcf<T>& f, T a, T b, Visit&& visit) {
  check_bounds(a, b);

  const T* fp = f.data();
  const std::size_t n = f.size();
  std::size_t k = a == T(0) ? 0 : piece_index(f, a);
  T l = a;
  T v = fp[2 * k + 1];
  for (std::size_t i = k + 1; i < n; ++i) {
    const T ti = fp[2 * i];
    if (ti >= b) {
      break;
    }
    visit(Segment<T>{l, ti, v});
    l = ti;
    v = fp[2 * i + 1];
  }
  visit(Segment<T>{l, b, v});
}

} // namespace mpcf

#pragma once

#include <cmath>
#include <string>

#include "masspcf/error.hpp"
#include "masspcf/pcf.hpp"
#include "masspcf/sweep.hpp"

namespace mpcf {

// All integrals accumulate in double, strictly left to right in time order,
// and round to the scalar kind of the inputs only at the end.

namespace detail {

[[noreturn]] inline void throw_divergent() {
  throw Error(ErrorCode::DivergentIntegral, "integrand is nonzero on the unbounded final piece");
}

[[noreturn]] inline void throw_nonfinite_integrand() {
  throw Error(ErrorCode::NonFinite, "integrand produced a NaN or infinite value");
}

template <Scalar T, class Combine>
double combine_integrate_acc(const Pcf<T>& f, const Pcf<T>& g, Combine& h, T a, T b) {
  double acc = 0.0;
  iterate_rectangles(f, g, a, b, [&](const Rectangle<T>& rect) {
    const double hv = h(static_cast<double>(rect.vf), static_cast<double>(rect.vg));
    if (std::isinf(rect.r)) {
      if (std::isnan(hv)) {
        throw_nonfinite_integrand();
      }
      if (hv != 0.0) {
        throw_divergent();
      }
      return;
    }
    acc += hv * (static_cast<double>(rect.r) - static_cast<double>(rect.l));
  });
  if (!std::isfinite(acc)) {
    throw_nonfinite_integrand();
  }
  return acc;
}

template <Scalar T, class Antiderivative>
double combine_integrate_timedep_acc(const Pcf<T>& f, const Pcf<T>& g, Antiderivative& big_h, T a, T b) {
  double acc = 0.0;
  iterate_rectangles(f, g, a, b, [&](const Rectangle<T>& rect) {
    const double vf = rect.vf;
    const double vg = rect.vg;
    const double c = big_h(vf, vg, static_cast<double>(rect.r)) - big_h(vf, vg, static_cast<double>(rect.l));
    if (!std::isfinite(c)) {
      if (std::isinf(rect.r)) {
        throw_divergent();
      }
      throw_nonfinite_integrand();
    }
    acc += c;
  });
  if (!std::isfinite(acc)) {
    throw_nonfinite_integrand();
  }
  return acc;
}

template <Scalar T, class Unary>
double integrate_single_acc(const Pcf<T>& f, Unary& h, T a, T b) {
  double acc = 0.0;
  iterate_segments(f, a, b, [&](const Segment<T>& seg) {
    const double hv = h(static_cast<double>(seg.v));
    if (std::isinf(seg.r)) {
      if (std::isnan(hv)) {
        throw_nonfinite_integrand();
      }
      if (hv != 0.0) {
        throw_divergent();
      }
      return;
    }
    acc += hv * (static_cast<double>(seg.r) - static_cast<double>(seg.l));
  });
  if (!std::isfinite(acc)) {
    throw_nonfinite_integrand();
  }
  return acc;
}

inline void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "L_p exponent must be a finite number >= 1");
  }
}

} // namespace detail

/// Integral over [a, b) of h(f(t), g(t)). h is called with doubles. Over an
/// unbounded range h must vanish on the final piece, else DivergentIntegral.
template <Scalar T, class Combine>
T combine_integrate(const Pcf<T>& f, const Pcf<T>& g, Combine&& h, T a = T(0), T b = infinity<T>()) {
  return static_cast<T>(detail::combine_integrate_acc(f, g, h, a, b));
}

/// Time-dependent integrand given by its antiderivative in t:
/// sum over cells of H(vf, vg, r) - H(vf, vg, l).
/// For b = +inf, H(vf, vg, inf) must be finite on the last cell.
template <Scalar T, class Antiderivative>
T combine_integrate_timedep(const Pcf<T>& f, const Pcf<T>& g, Antiderivative&& big_h, T a = T(0),
                            T b = infinity<T>()) {
  return static_cast<T>(detail::combine_integrate_timedep_acc(f, g, big_h, a, b));
}

template <Scalar T, class Unary>
T integrate_single(const Pcf<T>& f, Unary&& h, T a = T(0), T b = infinity<T>()) {
  return static_cast<T>(detail::integrate_single_acc(f, h, a, b));
}

template <Scalar T>
T lp_distance(const Pcf<T>& f, const Pcf<T>& g, double p, T a = T(0), T b = infinity<T>()) {
  detail::check_exponent(p);
  if (p == 1.0) {
    auto h = [](double x, double y) { return std::abs(x - y); };
    return static_cast<T>(detail::combine_integrate_acc(f, g, h, a, b));
  }
  auto h = [p](double x, double y) { return std::pow(std::abs(x - y), p); };
  return static_cast<T>(std::pow(detail::combine_integrate_acc(f, g, h, a, b), 1.0 / p));
}

template <Scalar T>
T l2_inner_product(const Pcf<T>& f, const Pcf<T>& g, T a = T(0), T b = infinity<T>()) {
  auto h = [](double x, double y) { return x * y; };
  return static_cast<T>(detail::combine_integrate_acc(f, g, h, a, b));
}

struct Identity {
  constexpr double operator()(double x) const noexcept { return x; }
};

/// r(integral over [a, b) of h(f, g)) packaged as a pairwise functional.
/// `symmetric` lets matrix jobs compute only the upper triangle;
/// `zero_diagonal` skips self-pairs entirely (distances).
template <class Combine, class Outer = Identity>
struct CombinationIntegral {
  Combine h;
  Outer outer{};
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  bool symmetric = false;
  bool zero_diagonal = false;

  template <Scalar T>
  T operator()(const Pcf<T>& f, const Pcf<T>& g) const {
    auto combine = h;
    return static_cast<T>(outer(detail::combine_integrate_acc(f, g, combine, static_cast<T>(a), static_cast<T>(b))));
  }
};

/// Like CombinationIntegral but with a time-dependent integrand given through
/// its antiderivative H(vf, vg, t).
template <class Antiderivative, class Outer = Identity>
struct TimeDependentIntegral {
  Antiderivative big_h;
  Outer outer{};
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  bool symmetric = false;
  bool zero_diagonal = false;

  template <Scalar T>
  T operator()(const Pcf<T>& f, const Pcf<T>& g) const {
    auto anti = big_h;
    return static_cast<T>(
        outer(detail::combine_integrate_timedep_acc(f, g, anti, static_cast<T>(a), static_cast<T>(b))));
  }
};

struct LpDistance {
  double p = 1.0;
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  static constexpr bool symmetric = true;
  static constexpr bool zero_diagonal = true;

  template <Scalar T>
  T operator()(const Pcf<T>& f, const Pcf<T>& g) const {
    return lp_distance(f, g, p, static_cast<T>(a), static_cast<T>(b));
  }
};

struct L2Inner {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  static constexpr bool symmetric = true;
  static constexpr bool zero_diagonal = false;

  template <Scalar T>
  T operator()(const Pcf<T>& f, const Pcf<T>& g) const {
    return l2_inner_product(f, g, static_cast<T>(a), static_cast<T>(b));
  }
};

} // namespace mpcf

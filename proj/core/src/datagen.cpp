#include "masspcf/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "masspcf/executor.hpp"

namespace mpcf {

namespace {

std::mt19937_64 seeded_engine(RngSpec spec, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Orders by magnitude, breaking ties by value so the order is total.
bool magnitude_less(double a, double b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  return ma < mb || (ma == mb && a < b);
}

// Index of the first time that is not strictly greater than its predecessor
// (the implicit predecessor of times[0] is t = 0), or times.size().
template <Scalar T>
std::size_t first_collision(const std::vector<T>& times) {
  T prev = T(0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > prev) || !std::isfinite(times[i])) {
      return i;
    }
    prev = times[i];
  }
  return times.size();
}

} // namespace

Rng::Rng(RngSpec spec, std::uint64_t stream) : engine_(seeded_engine(spec, stream)) {}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) {
    return static_cast<std::int64_t>(engine_());
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % range);
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u;
  double v;
  double s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

template <Scalar T>
PcfArray<T> noisy_trig(const Shape& shape, std::size_t n_points, TrigKind kind, double sigma, RngSpec rng,
                       unsigned workers) {
  if (shape.rank() == 0 || shape.element_count() == 0) {
    throw Error(ErrorCode::BadShape, "generator shape " + shape.to_string() + " holds no elements");
  }
  if (n_points == 0) {
    throw Error(ErrorCode::InvalidArgument, "n_points must be at least 1");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be finite and nonnegative");
  }

  std::vector<Pcf<T>> out(shape.element_count());
  run_blocks(out.size(), resolve_workers(workers), [&](std::size_t e, unsigned) {
    Rng r(rng, e);
    std::vector<double> raw(n_points);
    for (auto& u : raw) {
      u = r.uniform01();
    }
    std::vector<T> times(n_points);
    for (;;) {
      std::sort(raw.begin(), raw.end());
      std::transform(raw.begin(), raw.end(), times.begin(), [](double u) { return static_cast<T>(u); });
      const std::size_t bad = first_collision(times);
      if (bad == times.size()) {
        break;
      }
      raw[bad] = r.uniform01();
    }

    typename Pcf<T>::Buffer buf;
    buf.reserve(2 * (n_points + 1));
    auto g = [kind](double t) {
      const double x = 2.0 * std::numbers::pi * t;
      return kind == TrigKind::Sin ? std::sin(x) : std::cos(x);
    };
    buf.push_back(T(0));
    buf.push_back(static_cast<T>(g(0.0) + sigma * r.normal()));
    for (std::size_t i = 0; i < n_points; ++i) {
      buf.push_back(times[i]);
      buf.push_back(static_cast<T>(g(static_cast<double>(times[i])) + sigma * r.normal()));
    }
    out[e] = Pcf<T>::from_interleaved(std::move(buf));
  });
  return PcfArray<T>(shape, std::move(out));
}

template <Scalar T>
SyntheticDraw<T> synthetic_draw(RngSpec rng, std::uint64_t index) {
  Rng r(rng, index);
  const auto n = static_cast<std::size_t>(r.uniform_int(10, 1000));
  double alpha = r.normal();
  while (alpha == 0.0) {
    alpha = r.normal();
  }
  const double scale = std::abs(alpha);

  std::vector<double> raw(n - 1);
  for (auto& t : raw) {
    t = r.normal();
  }
  std::vector<double> values(n - 1);
  for (auto& v : values) {
    v = r.normal();
  }

  std::vector<T> times(n - 1);
  for (;;) {
    std::sort(raw.begin(), raw.end(), magnitude_less);
    std::transform(raw.begin(), raw.end(), times.begin(),
                   [scale](double t) { return static_cast<T>(scale * std::abs(t)); });
    const std::size_t bad = first_collision(times);
    if (bad == times.size()) {
      break;
    }
    raw[bad] = r.normal();
  }

  typename Pcf<T>::Buffer buf;
  buf.reserve(2 * n);
  buf.push_back(T(0));
  buf.push_back(static_cast<T>(values[0]));
  for (std::size_t k = 1; k < n; ++k) {
    buf.push_back(times[k - 1]);
    buf.push_back(k + 1 < n ? static_cast<T>(values[k]) : T(0));
  }
  return {Pcf<T>::from_interleaved(std::move(buf)), scale};
}

template <Scalar T>
std::vector<Pcf<T>> synthetic_benchmark(std::size_t count, RngSpec rng, unsigned workers) {
  if (count == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic benchmark count must be at least 1");
  }
  std::vector<Pcf<T>> out(count);
  run_blocks(count, resolve_workers(workers),
             [&](std::size_t i, unsigned) { out[i] = synthetic_draw<T>(rng, i).pcf; });
  return out;
}

template PcfArray<float> noisy_trig<float>(const Shape&, std::size_t, TrigKind, double, RngSpec, unsigned);
template PcfArray<double> noisy_trig<double>(const Shape&, std::size_t, TrigKind, double, RngSpec, unsigned);
template SyntheticDraw<float> synthetic_draw<float>(RngSpec, std::uint64_t);
template SyntheticDraw<double> synthetic_draw<double>(RngSpec, std::uint64_t);
template std::vector<Pcf<float>> synthetic_benchmark<float>(std::size_t, RngSpec, unsigned);
template std::vector<Pcf<double>> synthetic_benchmark<double>(std::size_t, RngSpec, unsigned);

} // namespace mpcf

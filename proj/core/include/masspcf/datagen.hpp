#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "masspcf/ndarray.hpp"
#include "masspcf/pcf.hpp"

namespace mpcf {

/// Seed for the generators. Every generated PCF draws from its own stream,
/// seeded from (seed, stream index), so results do not depend on how the work
/// is split across threads.
struct RngSpec {
  std::uint64_t seed = 0;
};

/// Deterministic random stream: mt19937_64 seeded through std::seed_seq from
/// (seed, stream). Both are fully specified by the C++ standard; the
/// distributions below are implemented here (the standard library ones are
/// implementation-defined), so a seed yields the same numbers everywhere.
class Rng {
public:
  Rng(RngSpec spec, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer on [lo, hi], both ends included.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal (Marsaglia polar method).
  double normal();

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class TrigKind { Sin, Cos };

/// Random PCFs around sin(2 pi t) or cos(2 pi t): n_points times uniform on
/// [0, 1), sorted, with t = 0 prepended (n_points + 1 rows in total); the
/// value at t_i is g(2 pi t_i) + N(0, sigma) noise. Colliding time draws are
/// redrawn.
template <Scalar T = double>
PcfArray<T> noisy_trig(const Shape& shape, std::size_t n_points, TrigKind kind, double sigma = 0.1,
                       RngSpec rng = {}, unsigned workers = 1);

template <Scalar T = double>
PcfArray<T> noisy_sin(const Shape& shape, std::size_t n_points = 100, double sigma = 0.1, RngSpec rng = {}) {
  return noisy_trig<T>(shape, n_points, TrigKind::Sin, sigma, rng);
}

template <Scalar T = double>
PcfArray<T> noisy_cos(const Shape& shape, std::size_t n_points = 100, double sigma = 0.1, RngSpec rng = {}) {
  return noisy_trig<T>(shape, n_points, TrigKind::Cos, sigma, rng);
}

template <Scalar T>
struct SyntheticDraw {
  Pcf<T> pcf;
  double scale; ///< |alpha|, the per-PCF time scale
};

/// One PCF of the synthetic benchmark set, from stream `index`:
/// n ~ U{10..1000}; alpha ~ N(0, 1); n - 1 raw times ~ N(0, 1) ordered by
/// magnitude; n - 1 values ~ N(0, 1). Rows are (0, v_0), (|alpha| |t_1|, v_1),
/// ..., (|alpha| |t_{n-1}|, 0), so every PCF is eventually zero.
template <Scalar T = double>
SyntheticDraw<T> synthetic_draw(RngSpec rng, std::uint64_t index);

template <Scalar T = double>
std::vector<Pcf<T>> synthetic_benchmark(std::size_t count, RngSpec rng = {}, unsigned workers = 1);

} // namespace mpcf

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "masspcf/error.hpp"
#include "masspcf/executor.hpp"
#include "masspcf/integrate.hpp"
#include "masspcf/pcf.hpp"

namespace mpcf {

/// Dense row-major matrix.
template <Scalar T>
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  T operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

struct PairwiseOptions {
  unsigned workers = 0;          ///< 0 = default_worker_count()
  std::size_t block_height = 0;  ///< rows per scheduled block, 0 = automatic
  bool serial_fallback = true;   ///< run single-worker when the job is tiny
};

/// Rows per block: max(1, ceil(m / (8 * workers))), capped so one block's
/// share of the output stays within 64 MiB.
std::size_t default_block_height(std::size_t m, unsigned workers, std::size_t element_bytes);

/// Below this many estimated sweep steps (m^2 * mean PCF size) a job runs on
/// one worker; thread start-up would dominate otherwise.
inline constexpr double kSerialWorkThreshold = 2.0e6;

enum class JobStatus { Pending, Running, Done, Failed, Cancelled };

using ProgressSink = std::function<void(double fraction)>;

/// A pairwise integrated combination matrix computed in block rows.
///
/// The functional F must be callable as F(f, g) -> T and expose `symmetric`
/// and `zero_diagonal` flags. For symmetric F only the upper triangle is
/// computed and each value is written to (i, j) and (j, i); with
/// zero_diagonal the self-pairs are skipped. Each entry is produced by exactly
/// one worker, so the matrix does not depend on the worker count.
///
/// Jobs are cancellable between blocks. Progress sinks are called after every
/// finished block, from worker threads, with a non-decreasing fraction; the
/// last call reports 1.0.
template <Scalar T>
class PairwiseJob {
public:
  template <class Functional>
  PairwiseJob(std::vector<Pcf<T>> collection, Functional functional, PairwiseOptions options = {})
      : state_(std::make_shared<State>()) {
    State& s = *state_;
    s.pcfs = std::move(collection);
    const std::size_t m = s.pcfs.size();
    if (m == 0) {
      throw Error(ErrorCode::EmptyCollection, "pairwise matrix of an empty collection");
    }

    s.workers = resolve_workers(options.workers);
    if (options.serial_fallback && s.workers > 1) {
      std::size_t points = 0;
      for (const auto& f : s.pcfs) {
        points += f.size();
      }
      const double work = static_cast<double>(m) * static_cast<double>(points);
      if (work < kSerialWorkThreshold) {
        s.workers = 1;
      }
    }
    s.block_height = options.block_height > 0 ? options.block_height
                                              : default_block_height(m, s.workers, sizeof(T));
    s.blocks = (m + s.block_height - 1) / s.block_height;

    const bool symmetric = functional.symmetric;
    const bool zero_diagonal = functional.zero_diagonal;
    s.total_entries = 0;
    for (std::size_t i = 0; i < m; ++i) {
      s.total_entries += entries_in_row(i, m, symmetric, zero_diagonal);
    }

    s.compute_block = [&s, functional = std::move(functional), symmetric, zero_diagonal](std::size_t block) {
      const std::size_t m = s.pcfs.size();
      const std::size_t begin = block * s.block_height;
      const std::size_t end = std::min(m, begin + s.block_height);
      std::size_t computed = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const Pcf<T>& fi = s.pcfs[i];
        const std::size_t first = symmetric ? (zero_diagonal ? i + 1 : i) : 0;
        for (std::size_t j = first; j < m; ++j) {
          if (!symmetric && zero_diagonal && i == j) {
            continue;
          }
          T value;
          try {
            value = functional(fi, s.pcfs[j]);
          } catch (const Error& e) {
            throw Error(e.code(), "pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.detail())
                .with_pair(i, j);
          }
          s.result(i, j) = value;
          if (symmetric) {
            s.result(j, i) = value;
          }
          ++computed;
        }
      }
      s.integrals.fetch_add(computed, std::memory_order_relaxed);
      return computed;
    };
  }

  PairwiseJob(const PairwiseJob&) = delete;
  PairwiseJob& operator=(const PairwiseJob&) = delete;

  ~PairwiseJob() {
    if (runner_.joinable()) {
      cancel();
      runner_.join();
    }
  }

  /// Registers a progress sink. A sink added after blocks have finished is
  /// immediately told the current fraction.
  void subscribe(ProgressSink sink) {
    std::lock_guard lock(state_->progress_mutex);
    if (state_->done_entries > 0 || state_->finished_blocks > 0) {
      sink(state_->fraction());
    }
    state_->sinks.push_back(std::move(sink));
  }

  /// Runs the job on a background thread; poll with wait_for().
  void start() {
    claim();
    runner_ = std::thread([s = state_] { execute(*s); });
  }

  /// Runs the job on the calling thread (plus workers) and returns when done.
  void run() {
    claim();
    execute(*state_);
  }

  void cancel() noexcept { state_->cancel.store(true, std::memory_order_relaxed); }

  bool wait_for(std::chrono::milliseconds timeout) {
    std::unique_lock lock(state_->mutex);
    return state_->finished_cv.wait_for(lock, timeout, [&] { return state_->is_finished(); });
  }

  void wait() {
    std::unique_lock lock(state_->mutex);
    state_->finished_cv.wait(lock, [&] { return state_->is_finished(); });
  }

  JobStatus status() const {
    std::lock_guard lock(state_->mutex);
    return state_->status;
  }

  /// Waits for the job and hands over the matrix. Throws Error(Cancelled) for
  /// cancelled jobs and rethrows the first failure otherwise.
  DenseMatrix<T> get() {
    wait();
    if (runner_.joinable()) {
      runner_.join();
    }
    std::lock_guard lock(state_->mutex);
    switch (state_->status) {
    case JobStatus::Cancelled:
      throw Error(ErrorCode::Cancelled, "pairwise job was cancelled; partial results discarded");
    case JobStatus::Failed:
      std::rethrow_exception(state_->error);
    default:
      break;
    }
    return std::move(state_->result);
  }

  std::size_t integrals_computed() const noexcept { return state_->integrals.load(); }
  std::size_t block_count() const noexcept { return state_->blocks; }
  std::size_t block_height() const noexcept { return state_->block_height; }
  unsigned workers() const noexcept { return state_->workers; }
  std::size_t expected_integrals() const noexcept { return state_->total_entries; }

private:
  struct State {
    std::vector<Pcf<T>> pcfs;
    DenseMatrix<T> result;
    std::function<std::size_t(std::size_t)> compute_block;
    unsigned workers = 1;
    std::size_t block_height = 1;
    std::size_t blocks = 0;
    std::size_t total_entries = 0;

    std::atomic<bool> cancel{false};
    std::atomic<std::size_t> integrals{0};

    mutable std::mutex mutex;
    std::condition_variable finished_cv;
    JobStatus status = JobStatus::Pending;
    std::exception_ptr error;

    std::mutex progress_mutex;
    std::vector<ProgressSink> sinks;
    std::size_t done_entries = 0;
    std::size_t finished_blocks = 0;

    bool is_finished() const {
      return status == JobStatus::Done || status == JobStatus::Failed || status == JobStatus::Cancelled;
    }

    // Requires progress_mutex.
    double fraction() const {
      if (finished_blocks == blocks) {
        return 1.0;
      }
      if (total_entries == 0) {
        return static_cast<double>(finished_blocks) / static_cast<double>(blocks);
      }
      return static_cast<double>(done_entries) / static_cast<double>(total_entries);
    }
  };

  static std::size_t entries_in_row(std::size_t i, std::size_t m, bool symmetric, bool zero_diagonal) {
    if (symmetric) {
      return zero_diagonal ? m - i - 1 : m - i;
    }
    return zero_diagonal ? m - 1 : m;
  }

  void claim() {
    std::lock_guard lock(state_->mutex);
    if (state_->status != JobStatus::Pending) {
      throw Error(ErrorCode::InvalidArgument, "pairwise job was already started");
    }
    state_->status = JobStatus::Running;
  }

  static void execute(State& s) {
    const std::size_t m = s.pcfs.size();
    s.result = DenseMatrix<T>(m, m);
    JobStatus final_status = JobStatus::Done;
    std::exception_ptr error;
    try {
      run_blocks(
          s.blocks, s.workers,
          [&s](std::size_t block, unsigned) {
            const std::size_t computed = s.compute_block(block);
            std::lock_guard lock(s.progress_mutex);
            s.done_entries += computed;
            ++s.finished_blocks;
            const double fraction = s.fraction();
            for (const auto& sink : s.sinks) {
              sink(fraction);
            }
          },
          &s.cancel);
      if (s.cancel.load() && s.finished_blocks < s.blocks) {
        final_status = JobStatus::Cancelled;
      }
    } catch (...) {
      final_status = JobStatus::Failed;
      error = std::current_exception();
    }
    if (final_status != JobStatus::Done) {
      s.result = DenseMatrix<T>();
    }
    {
      std::lock_guard lock(s.mutex);
      s.status = final_status;
      s.error = error;
    }
    s.finished_cv.notify_all();
  }

  std::shared_ptr<State> state_;
  std::thread runner_;
};

template <Scalar T>
void progress_subscribe(PairwiseJob<T>& job, ProgressSink sink) {
  job.subscribe(std::move(sink));
}

/// Generic engine: F(i, j) for every pair the functional's symmetry requires.
template <Scalar T, class Functional>
DenseMatrix<T> pairwise(std::span<const Pcf<T>> collection, Functional functional, PairwiseOptions options = {}) {
  PairwiseJob<T> job(std::vector<Pcf<T>>(collection.begin(), collection.end()), std::move(functional), options);
  job.run();
  return job.get();
}

/// L_p distance matrix over [0, inf).
template <Scalar T>
DenseMatrix<T> pdist(std::span<const Pcf<T>> collection, double p = 1.0, PairwiseOptions options = {}) {
  detail::check_exponent(p);
  return pairwise(collection, LpDistance{p}, options);
}

template <Scalar T>
DenseMatrix<T> pdist(const std::vector<Pcf<T>>& collection, double p = 1.0, PairwiseOptions options = {}) {
  return pdist(std::span<const Pcf<T>>(collection), p, options);
}

/// L_2 Gram matrix over [0, inf), diagonal included.
template <Scalar T>
DenseMatrix<T> l2_kernel(std::span<const Pcf<T>> collection, PairwiseOptions options = {}) {
  return pairwise(collection, L2Inner{}, options);
}

template <Scalar T>
DenseMatrix<T> l2_kernel(const std::vector<Pcf<T>>& collection, PairwiseOptions options = {}) {
  return l2_kernel(std::span<const Pcf<T>>(collection), options);
}

} // namespace mpcf

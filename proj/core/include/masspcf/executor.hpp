#pragma once

#include <atomic>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

namespace mpcf {

/// Worker count used when the caller asks for "auto" (0): the MASSPCF_THREADS
/// environment variable if it holds a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned default_worker_count();

unsigned resolve_workers(unsigned requested);

/// Distributes block indices [0, n_blocks) over per-worker queues. A worker
/// pops from the front of its own queue; when that runs dry it steals from
/// the back of another worker's queue.
class BlockScheduler {
public:
  BlockScheduler(std::size_t n_blocks, unsigned workers);

  std::optional<std::size_t> next(unsigned worker);

  unsigned workers() const noexcept { return workers_; }
  std::size_t steals() const noexcept { return steals_.load(std::memory_order_relaxed); }

private:
  struct alignas(64) Lane {
    std::mutex mutex;
    std::deque<std::size_t> blocks;
  };

  unsigned workers_;
  std::unique_ptr<Lane[]> lanes_;
  std::atomic<std::size_t> steals_{0};
};

using BlockBody = std::function<void(std::size_t block, unsigned worker)>;

/// Runs body(block, worker) for every block on `workers` threads (the calling
/// thread is worker 0). Stops handing out blocks once `stop` becomes true or
/// any body throws; the first exception is rethrown after all workers join.
void run_blocks(std::size_t n_blocks, unsigned workers, const BlockBody& body,
                const std::atomic<bool>* stop = nullptr);

} // namespace mpcf

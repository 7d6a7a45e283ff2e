#include "masspcf/executor.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace mpcf {

unsigned default_worker_count() {
  if (const char* env = std::getenv("MASSPCF_THREADS")) {
    unsigned n = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec == std::errc() && ptr == end && n > 0) {
      return n;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

unsigned resolve_workers(unsigned requested) {
  return requested == 0 ? default_worker_count() : requested;
}

BlockScheduler::BlockScheduler(std::size_t n_blocks, unsigned workers)
    : workers_(std::max(1u, workers)), lanes_(std::make_unique<Lane[]>(workers_)) {
  // Contiguous runs per worker so neighbouring blocks stay on one thread
  // until someone steals them.
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const auto owner = static_cast<unsigned>(b * workers_ / n_blocks);
    lanes_[owner].blocks.push_back(b);
  }
}

std::optional<std::size_t> BlockScheduler::next(unsigned worker) {
  {
    Lane& own = lanes_[worker];
    std::lock_guard lock(own.mutex);
    if (!own.blocks.empty()) {
      const std::size_t b = own.blocks.front();
      own.blocks.pop_front();
      return b;
    }
  }
  for (unsigned offset = 1; offset < workers_; ++offset) {
    Lane& victim = lanes_[(worker + offset) % workers_];
    std::lock_guard lock(victim.mutex);
    if (!victim.blocks.empty()) {
      const std::size_t b = victim.blocks.back();
      victim.blocks.pop_back();
      steals_.fetch_add(1, std::memory_order_relaxed);
      return b;
    }
  }
  return std::nullopt;
}

void run_blocks(std::size_t n_blocks, unsigned workers, const BlockBody& body, const std::atomic<bool>* stop) {
  if (n_blocks == 0) {
    return;
  }
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, n_blocks));

  auto stopped = [stop] { return stop != nullptr && stop->load(std::memory_order_relaxed); };

  if (workers == 1) {
    for (std::size_t b = 0; b < n_blocks && !stopped(); ++b) {
      body(b, 0);
    }
    return;
  }

  BlockScheduler scheduler(n_blocks, workers);
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&](unsigned worker) {
    while (!failed.load(std::memory_order_relaxed) && !stopped()) {
      auto block = scheduler.next(worker);
      if (!block) {
        return;
      }
      try {
        body(*block, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
      threads.emplace_back(work, w);
    }
    work(0);
  }

  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

} // namespace mpcf

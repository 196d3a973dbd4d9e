#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sigker {

/// Fixed-size worker pool for statically partitioned loops. Work items are
/// half-open index ranges; the partition depends only on (count, workers),
/// never on scheduling, so results written to disjoint slots are
/// reproducible across runs and thread counts.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned workers() const noexcept { return static_cast<unsigned>(threads_.size()) + 1; }

  // Runs body(chunk_index, begin, end) over a static partition of [0, count)
  // into workers() chunks; the calling thread takes chunk 0. Blocks until
  // every chunk finishes. Exceptions from chunks are rethrown (first wins).
  void parallel_for(std::size_t count,
                    const std::function<void(unsigned, std::size_t, std::size_t)>& body);

 private:
  struct Task {
    const std::function<void(unsigned, std::size_t, std::size_t)>* body = nullptr;
    std::size_t count = 0;
    std::size_t generation = 0;
  };

  void worker_loop(unsigned worker_index);
  static std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t count, unsigned chunks,
                                                          unsigned index);

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  Task task_;
  std::size_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr first_error_;
};

}  // namespace sigker

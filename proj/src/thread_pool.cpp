#include "sigker/thread_pool.hpp"

#include <algorithm>

namespace sigker {

ThreadPool::ThreadPool(unsigned workers) {
  const unsigned extra = workers > 1 ? workers - 1 : 0;
  threads_.reserve(extra);
  for (unsigned i = 0; i < extra; ++i)
    threads_.emplace_back([this, i] { worker_loop(i + 1); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

std::pair<std::size_t, std::size_t> ThreadPool::chunk_bounds(std::size_t count, unsigned chunks,
                                                             unsigned index) {
  const std::size_t base = count / chunks;
  const std::size_t rem = count % chunks;
  const std::size_t begin = index * base + std::min<std::size_t>(index, rem);
  const std::size_t size = base + (index < rem ? 1 : 0);
  return {begin, begin + size};
}

void ThreadPool::worker_loop(unsigned worker_index) {
  std::size_t seen = 0;
  for (;;) {
    const std::function<void(unsigned, std::size_t, std::size_t)>* body = nullptr;
    std::size_t count = 0;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || task_.generation > seen; });
      if (stop_) return;
      seen = task_.generation;
      body = task_.body;
      count = task_.count;
    }
    const auto [begin, end] = chunk_bounds(count, workers(), worker_index);
    try {
      if (begin < end) (*body)(worker_index, begin, end);
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!first_error_) first_error_ = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }
}

void ThreadPool::parallel_for(
    std::size_t count, const std::function<void(unsigned, std::size_t, std::size_t)>& body) {
  if (threads_.empty()) {
    if (count > 0) body(0, 0, count);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    task_ = Task{&body, count, ++generation_};
    pending_ = static_cast<unsigned>(threads_.size());
    first_error_ = nullptr;
  }
  start_cv_.notify_all();
  const auto [begin, end] = chunk_bounds(count, workers(), 0);
  std::exception_ptr own_error;
  try {
    if (begin < end) body(0, begin, end);
  } catch (...) {
    own_error = std::current_exception();
  }
  {
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
  }
  if (own_error) std::rethrow_exception(own_error);
  if (first_error_) std::rethrow_exception(first_error_);
}

}  // namespace sigker

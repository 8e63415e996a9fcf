#include "merbit/thread_pool.hpp"

namespace merbit {

ThreadPool::ThreadPool(int concurrency)
    : concurrency_(concurrency < 1 ? 1 : concurrency) {
  workers_.reserve(static_cast<std::size_t>(concurrency_ - 1));
  for (int i = 0; i < concurrency_ - 1; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    shutting_down_ = true;
  }
  start_cv_.notify_all();
  for (std::thread& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
  std::uint64_t seen = 0;
  while (true) {
    {
      std::unique_lock<std::mutex> lock(mu_);
      start_cv_.wait(lock, [&] {
        return shutting_down_ || generation_ != seen;
      });
      if (shutting_down_) return;
      seen = generation_;
    }
    run_items();
  }
}

void ThreadPool::run_items() {
  while (true) {
    index_t item;
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (next_item_ >= job_count_) return;
      item = next_item_++;
    }
    try {
      (*job_)(item);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!first_error_) first_error_ = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (++items_done_ == job_count_) {
        done_cv_.notify_all();
        return;
      }
    }
  }
}

void ThreadPool::for_each_index(index_t count,
                                const std::function<void(index_t)>& fn) {
  if (count <= 0) return;
  if (concurrency_ == 1 || count == 1) {
    for (index_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    job_ = &fn;
    job_count_ = count;
    next_item_ = 0;
    items_done_ = 0;
    first_error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  run_items();
  {
    std::unique_lock<std::mutex> lock(mu_);
    done_cv_.wait(lock, [&] { return items_done_ == job_count_; });
    job_ = nullptr;
    if (first_error_) std::rethrow_exception(first_error_);
  }
}

void parallel_for_index(ThreadPool* pool, index_t count,
                        const std::function<void(index_t)>& fn) {
  if (pool != nullptr) {
    pool->for_each_index(count, fn);
  } else {
    for (index_t i = 0; i < count; ++i) fn(i);
  }
}

}  // namespace merbit

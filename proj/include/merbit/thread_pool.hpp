#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "merbit/types.hpp"

namespace merbit {

// Minimal persistent worker pool for block-parallel loops.  The calling
// thread participates, so a pool of concurrency N owns N-1 workers and
// concurrency 1 degenerates to a plain sequential loop.  Work items are
// handed out from a shared cursor; every consumer of the pool must make its
// items write to disjoint locations, so the schedule can never influence
// results.
class ThreadPool {
 public:
  explicit ThreadPool(int concurrency);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int concurrency() const { return concurrency_; }

  // Runs fn(i) for every i in [0, count); returns when all items finished.
  // Exceptions thrown by fn propagate to the caller (first one wins).
  void for_each_index(index_t count,
                      const std::function<void(index_t)>& fn);

 private:
  void worker_loop();
  void run_items();

  int concurrency_ = 1;
  std::vector<std::thread> workers_;

  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(index_t)>* job_ = nullptr;
  index_t job_count_ = 0;
  index_t next_item_ = 0;
  index_t items_done_ = 0;
  std::uint64_t generation_ = 0;
  bool shutting_down_ = false;
  std::exception_ptr first_error_;
};

// Convenience: sequential when pool is null.
void parallel_for_index(ThreadPool* pool, index_t count,
                        const std::function<void(index_t)>& fn);

}  // namespace merbit

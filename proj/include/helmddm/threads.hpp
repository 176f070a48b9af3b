#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace helmddm {

/// In-process worker pool. Tasks are claimed via an atomic counter; callers
/// must ensure tasks write only to per-task buffers, so results do not depend
/// on scheduling or on the number of workers.
class WorkerPool {
 public:
  /// n_threads <= 1 runs everything inline on the calling thread.
  explicit WorkerPool(int n_threads);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int thread_count() const { return n_threads_; }

  /// Runs fn(i) for i in [0, n). Blocks until all tasks finish.
  /// Exceptions thrown by tasks are rethrown (one of them) on the caller.
  void parallel_for(long n, const std::function<void(long)>& fn);

 private:
  void worker_loop();

  int n_threads_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_work_;
  std::condition_variable cv_done_;
  const std::function<void(long)>* job_ = nullptr;
  long job_size_ = 0;
  long next_ = 0;
  long done_ = 0;
  unsigned long generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace helmddm

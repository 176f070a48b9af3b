#include "helmddm/threads.hpp"

namespace helmddm {

WorkerPool::WorkerPool(int n_threads) : n_threads_(n_threads < 1 ? 1 : n_threads) {
  for (int t = 0; t < n_threads_ - 1; ++t)
    workers_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  cv_work_.notify_all();
  for (auto& w : workers_) w.join();
}

void WorkerPool::worker_loop() {
  unsigned long seen = 0;
  for (;;) {
    const std::function<void(long)>* job = nullptr;
    {
      std::unique_lock<std::mutex> lk(mu_);
      cv_work_.wait(lk, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
    }
    for (;;) {
      long i;
      {
        std::lock_guard<std::mutex> lk(mu_);
        if (next_ >= job_size_) break;
        i = next_++;
      }
      try {
        (*job)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu_);
        if (!error_) error_ = std::current_exception();
      }
      {
        std::lock_guard<std::mutex> lk(mu_);
        if (++done_ == job_size_) cv_done_.notify_all();
      }
    }
  }
}

void WorkerPool::parallel_for(long n, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  if (n_threads_ == 1 || n == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(mu_);
    job_ = &fn;
    job_size_ = n;
    next_ = 0;
    done_ = 0;
    error_ = nullptr;
    ++generation_;
  }
  cv_work_.notify_all();
  // caller participates
  for (;;) {
    long i;
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (next_ >= job_size_) break;
      i = next_++;
    }
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu_);
      if (!error_) error_ = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (++done_ == job_size_) cv_done_.notify_all();
    }
  }
  std::unique_lock<std::mutex> lk(mu_);
  cv_done_.wait(lk, [&] { return done_ == job_size_; });
  job_ = nullptr;
  if (error_) std::rethrow_exception(error_);
}

}  // namespace helmddm

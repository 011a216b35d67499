#include "pmmh/thread_pool.hpp"

#include <stdexcept>

namespace pmmh {

WorkerPool::WorkerPool(int workers) : n_workers_(workers < 1 ? 1 : workers) {
  threads_.reserve(n_workers_ - 1);
  for (int w = 1; w < n_workers_; ++w) {
    threads_.emplace_back([this, w] { worker_loop(w); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (std::thread& t : threads_) t.join();
}

void WorkerPool::run_chunk(int worker_index) {
  const std::size_t lo = job_size_ * worker_index / n_workers_;
  const std::size_t hi = job_size_ * (worker_index + 1) / n_workers_;
  try {
    for (std::size_t i = lo; i < hi; ++i) (*body_)(i);
  } catch (...) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!first_error_) first_error_ = std::current_exception();
  }
}

void WorkerPool::worker_loop(int worker_index) {
  std::uint64_t seen_epoch = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || epoch_ != seen_epoch; });
      if (stop_) return;
      seen_epoch = epoch_;
    }
    run_chunk(worker_index);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      pending_ -= 1;
    }
    done_cv_.notify_all();
  }
}

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (n_workers_ == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    body_ = &body;
    job_size_ = n;
    pending_ = n_workers_ - 1;
    first_error_ = nullptr;
    epoch_ += 1;
  }
  start_cv_.notify_all();
  run_chunk(0);  // caller participates as worker 0
  {
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    body_ = nullptr;
    if (first_error_) std::rethrow_exception(first_error_);
  }
}

}  // namespace pmmh

#ifndef PMMH_THREAD_POOL_HPP
#define PMMH_THREAD_POOL_HPP

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pmmh {

// Persistent pool executing index ranges in fixed contiguous chunks: worker w
// always gets [w*n/W, (w+1)*n/W). Work items must write only to their own
// slots; results therefore never depend on scheduling, and a single-worker
// pool runs everything inline.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return n_workers_; }

  // Calls body(i) for i in [0, n); blocks until every index has run.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

 private:
  void worker_loop(int worker_index);
  void run_chunk(int worker_index);

  int n_workers_;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t job_size_ = 0;
  std::uint64_t epoch_ = 0;
  int pending_ = 0;
  bool stop_ = false;
  std::exception_ptr first_error_;
};

}  // namespace pmmh

#endif

#include "voxplane/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace voxplane {
namespace {

class ThreadPool {
 public:
  explicit ThreadPool(unsigned workers) { start(workers); }

  ~ThreadPool() { stop(); }

  void resize(unsigned workers) {
    stop();
    start(workers);
  }

  unsigned size() const { return static_cast<unsigned>(threads_.size()) + 1; }

  void run(std::size_t n, std::size_t grain,
           const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (threads_.empty() || n <= grain) {
      fn(0, n);
      return;
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      job_fn_ = &fn;
      job_n_ = n;
      job_grain_ = grain;
      cursor_.store(0, std::memory_order_relaxed);
      pending_.store(static_cast<int>(threads_.size()), std::memory_order_relaxed);
      ++epoch_;
    }
    cv_.notify_all();
    work(fn, n, grain);  // the calling thread participates
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [this] { return pending_.load(std::memory_order_acquire) == 0; });
    job_fn_ = nullptr;
  }

 private:
  void start(unsigned workers) {
    quit_ = false;
    epoch_ = 0;
    pending_.store(0);
    for (unsigned i = 0; i + 1 < workers; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  void stop() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      quit_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
    threads_.clear();
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
      std::size_t n = 0, grain = 0;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return quit_ || epoch_ != seen; });
        if (quit_) return;
        seen = epoch_;
        fn = job_fn_;
        n = job_n_;
        grain = job_grain_;
      }
      if (fn) work(*fn, n, grain);
      if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        std::lock_guard<std::mutex> lk(mu_);
        done_cv_.notify_one();
      }
    }
  }

  void work(const std::function<void(std::size_t, std::size_t)>& fn, std::size_t n,
            std::size_t grain) {
    for (;;) {
      const std::size_t b = cursor_.fetch_add(grain, std::memory_order_relaxed);
      if (b >= n) break;
      fn(b, std::min(b + grain, n));
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::uint64_t epoch_ = 0;
  bool quit_ = false;
  const std::function<void(std::size_t, std::size_t)>* job_fn_ = nullptr;
  std::size_t job_n_ = 0;
  std::size_t job_grain_ = 1;
  std::atomic<std::size_t> cursor_{0};
  std::atomic<int> pending_{0};
};

ThreadPool& pool() {
  static ThreadPool p(default_thread_count());
  return p;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("VOXPLANE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void set_thread_count(unsigned n) {
  if (n == 0) n = default_thread_count();
  if (n != pool().size()) pool().resize(n);
}

unsigned thread_count() { return pool().size(); }

void parallel_for_chunks(std::size_t n, std::size_t grain,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  pool().run(n, grain == 0 ? 1 : grain, fn);
}

}  // namespace voxplane

#include "ablmini/worker_pool.hpp"

#include "ablmini/kernels.hpp"

#include <stdexcept>

namespace ablmini {

WorkerPool::WorkerPool(int workers) : nworkers_(workers) {
  if (workers < 1) throw std::invalid_argument("WorkerPool: workers must be >= 1");
  for (int i = 1; i < workers; ++i)
    threads_.emplace_back([this, i] { worker_loop(i); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lk(m_);
    stop_ = true;
    ++epoch_;
  }
  cv_start_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::split(int w, int begin, int end, int& lo, int& hi) const {
  const long len = end - begin;
  lo = begin + static_cast<int>(len * w / nworkers_);
  hi = begin + static_cast<int>(len * (w + 1) / nworkers_);
}

void WorkerPool::run(int begin, int end,
                     const std::function<void(int, int, int)>& body) {
  if (end <= begin) return;
  if (nworkers_ == 1) {
    body(0, begin, end);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(m_);
    job_.body = &body;
    job_.begin = begin;
    job_.end = end;
    pending_ = nworkers_ - 1;
    ++epoch_;
  }
  cv_start_.notify_all();
  int lo, hi;
  split(0, begin, end, lo, hi);
  if (hi > lo) body(0, lo, hi);
  std::unique_lock<std::mutex> lk(m_);
  cv_done_.wait(lk, [this] { return pending_ == 0; });
}

void WorkerPool::worker_loop(int id) {
  unsigned long seen = 0;
  for (;;) {
    const std::function<void(int, int, int)>* body;
    int begin, end;
    {
      std::unique_lock<std::mutex> lk(m_);
      cv_start_.wait(lk, [&] { return epoch_ != seen; });
      seen = epoch_;
      if (stop_) return;
      body = job_.body;
      begin = job_.begin;
      end = job_.end;
    }
    int lo, hi;
    split(id, begin, end, lo, hi);
    if (hi > lo) (*body)(id, lo, hi);
    {
      std::lock_guard<std::mutex> lk(m_);
      if (--pending_ == 0) cv_done_.notify_one();
    }
  }
}

void WorkerPool::for_each(int begin, int end,
                          const std::function<void(int)>& fn) {
  run(begin, end, [&fn](int, int lo, int hi) {
    for (int k = lo; k < hi; ++k) fn(k);
  });
}

double WorkerPool::reduce(int begin, int end, int chunk_size,
                          const std::function<double(int, int)>& chunk_fn) {
  const int len = end - begin;
  if (len <= 0) return 0.0;
  const int nchunks = (len + chunk_size - 1) / chunk_size;
  std::vector<double> partial(nchunks, 0.0);
  run(0, nchunks, [&](int, int clo, int chi) {
    for (int c = clo; c < chi; ++c) {
      const int lo = begin + c * chunk_size;
      const int hi = std::min(end, lo + chunk_size);
      partial[c] = chunk_fn(lo, hi);
    }
  });
  return kern::pairwise_combine(partial.data(), nchunks);
}

} // namespace ablmini

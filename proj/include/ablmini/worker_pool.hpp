#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ablmini {

// Fixed-size pool of workers standing in for ranks. Work items are static
// slab splits of an index range; the calling thread participates as worker 0
// and run() does not return until every worker has finished, so timing a
// run() call times up to the barrier. Reductions combine partials over a
// fixed chunk grid with a pairwise tree, which makes them independent of the
// worker count.
class WorkerPool {
public:
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return nworkers_; }

  // body(worker, lo, hi) over a static split of [begin, end)
  void run(int begin, int end, const std::function<void(int, int, int)>& body);

  // convenience: fn(index) for each index in [begin, end), slab-split
  void for_each(int begin, int end, const std::function<void(int)>& fn);

  // deterministic reduction: chunk_fn(lo, hi) -> partial over fixed
  // chunk_size pieces, combined with a pairwise tree in chunk order
  double reduce(int begin, int end, int chunk_size,
                const std::function<double(int, int)>& chunk_fn);

private:
  struct Job {
    const std::function<void(int, int, int)>* body = nullptr;
    int begin = 0, end = 0;
  };

  void worker_loop(int id);
  void split(int w, int begin, int end, int& lo, int& hi) const;

  int nworkers_;
  std::vector<std::thread> threads_;
  std::mutex m_;
  std::condition_variable cv_start_, cv_done_;
  Job job_;
  unsigned long epoch_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

} // namespace ablmini

#include "ablmini/perf.hpp"

#include "ablmini/reports.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ablmini {

double measure_tstep(const std::vector<double>& step_seconds) {
  if (static_cast<int>(step_seconds.size()) < timing_window_last)
    throw std::invalid_argument(
        "measure_tstep: need at least 200 steps to open the 101-200 window");
  double s = 0.0;
  for (int k = timing_window_first; k <= timing_window_last; ++k)
    s += step_seconds[k - 1];
  return s / (timing_window_last - timing_window_first + 1);
}

void annotate_parallel_efficiency(std::vector<ScalingRecord>& records) {
  if (records.empty()) return;
  const ScalingRecord* base = &records.front();
  for (const auto& r : records)
    if (r.workers < base->workers) base = &r;
  const double t0p0 = base->t_step * base->workers;
  for (auto& r : records) r.p_eff = t0p0 / (r.t_step * r.workers);
}

double real_time_ratio(double t_step, double dt) { return t_step / dt; }

double timer_overhead() {
  static const double ovh = [] {
    using clock = std::chrono::steady_clock;
    const auto a = clock::now();
    constexpr int reps = 1000;
    for (int i = 0; i < reps; ++i) (void)clock::now();
    const auto b = clock::now();
    return std::chrono::duration<double>(b - a).count() / reps;
  }();
  return ovh;
}

std::vector<ScalingRecord> scaling_sweep(const CaseConfig& base,
                                         const std::vector<int>& worker_counts,
                                         const SweepOptions& opt) {
  if (opt.steps < timing_window_last)
    throw std::invalid_argument("scaling_sweep: steps must cover the window");
  const unsigned hw = std::thread::hardware_concurrency();
  std::vector<ScalingRecord> records;
  for (int w : worker_counts) {
    CaseConfig cfg = base;
    cfg.threads = w;
    if (opt.weak) {
      const long long per_worker = 1LL * base.nx * base.ny * base.nz;
      cfg = weak_scale_domain(base, per_worker * w);
      cfg.threads = w;
    }
    WorkerPool pool(w);
    Stepper stepper(cfg, pool);
    State st = initialize(cfg, stepper.grid(), pool);
    std::vector<double> times;
    times.reserve(opt.steps);
    double vi = 0, pi = 0, ti = 0;
    int measured = 0;
    for (int s = 1; s <= opt.steps; ++s) {
      const StepTimers tm = stepper.step(st);
      times.push_back(tm.total);
      if (s >= timing_window_first && s <= timing_window_last) {
        vi += tm.vel_iters_mean;
        pi += tm.nodal_vcycles;
        ti += tm.theta_iters;
        ++measured;
      }
    }
    ScalingRecord rec;
    rec.workers = w;
    rec.points = stepper.grid().cells();
    rec.t_step = measure_tstep(times);
    rec.r_t = real_time_ratio(rec.t_step, stepper.dt());
    rec.mean_vi = vi / measured;
    rec.mean_pi = pi / measured;
    rec.mean_ti = ti / measured;
    rec.oversubscribed = hw > 0 && static_cast<unsigned>(w) > hw;
    records.push_back(rec);
  }
  annotate_parallel_efficiency(records);
  if (!opt.csv_path.empty()) {
    std::ofstream os(opt.csv_path);
    if (!os) throw std::runtime_error("scaling_sweep: cannot open " + opt.csv_path);
    write_scaling_csv(os, base, records);
  }
  return records;
}

} // namespace ablmini

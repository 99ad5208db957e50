#pragma once

#include "ablmini/timestepper.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ablmini {

struct ScalingRecord {
  int workers = 0;
  long long points = 0;
  double t_step = 0.0; // mean wall seconds over the measurement window
  double p_eff = 0.0;
  double r_t = 0.0; // wall-time to physical-time ratio t_step/dt
  double mean_vi = 0.0, mean_pi = 0.0, mean_ti = 0.0;
  bool oversubscribed = false;
};

// Mean wall time over steps 101..200 inclusive (1-indexed); shorter runs
// are rejected.
double measure_tstep(const std::vector<double>& step_seconds);

// Measurement window bounds (1-indexed, inclusive).
constexpr int timing_window_first = 101;
constexpr int timing_window_last = 200;

// P_eff = t0*P0/(t_step*P) with P0 the smallest worker count present.
void annotate_parallel_efficiency(std::vector<ScalingRecord>& records);

double real_time_ratio(double t_step, double dt);

struct SweepOptions {
  bool weak = false;        // weak scaling: grow the domain with the workers
  int steps = 200;          // >= 200 so the window exists
  std::string csv_path;     // empty: no file written
};

// Run the measurement window at each worker count on the same problem
// (strong) or on weak-scaled domains at fixed points per worker. Worker
// counts above the hardware concurrency are flagged and run anyway.
std::vector<ScalingRecord> scaling_sweep(const CaseConfig& base,
                                         const std::vector<int>& worker_counts,
                                         const SweepOptions& opt);

void write_scaling_csv(std::ostream& os, const CaseConfig& base,
                       const std::vector<ScalingRecord>& records);

// Startup-measured monotonic-clock read overhead (seconds), recorded into
// run metadata.
double timer_overhead();

} // namespace ablmini

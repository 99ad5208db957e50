#pragma once

#include <stdexcept>
#include <string>

namespace ablmini {

struct SolveStats {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  double wall_time = 0.0;
};

class SolveFailure : public std::runtime_error {
public:
  SolveFailure(const std::string& what, const SolveStats& stats)
      : std::runtime_error(what), stats(stats) {}
  SolveStats stats;
};

} // namespace ablmini

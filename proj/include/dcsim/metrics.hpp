#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcsim/scheduling.hpp"

namespace dcsim {

/// A PF-utility input contained an MT with zero (or negative) throughput.
class StarvedMtError : public std::runtime_error {
 public:
  explicit StarvedMtError(std::vector<int> ids);
  const std::vector<int>& mt_ids() const { return ids_; }

 private:
  std::vector<int> ids_;
};

/// Sum of natural logs of the per-MT throughputs; throws StarvedMtError when
/// any entry is not positive.
double pf_utility(std::span<const double> throughputs);

/// (sum x)^2 / (M * sum x^2); throws std::invalid_argument on an all-zero
/// or empty input.
double jain_index(std::span<const double> throughputs);

struct RunMetrics {
  std::vector<double> mt_throughput;  // x_u, bits/slot
  double pf_utility = 0.0;            // computed on the scaled (Mbit/s) throughputs
  double jfi = 0.0;
  double system_throughput = 0.0;  // bits/slot
  ComplexityCounters ops;
  double comparisons_per_slot = 0.0;
  double additions_per_slot = 0.0;
  double multiplications_per_slot = 0.0;
  double messages_per_slot = 0.0;
  std::uint64_t sync_events = 0;
};

/// Collapses a finished run: x_u = delivered bits / slots across all serving
/// BSs. utility_scale converts bits/slot to the unit the PF utility is taken
/// in (1e-6 / slot_duration gives Mbit/s); JFI is scale-free.
RunMetrics aggregate(const Scheduler& sched, std::uint64_t slots, double utility_scale);

}  // namespace dcsim

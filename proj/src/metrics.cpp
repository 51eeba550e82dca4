#include "dcsim/metrics.hpp"

#include <cmath>

namespace dcsim {
namespace {

std::string starved_message(const std::vector<int>& ids) {
  std::string msg = "PF utility undefined, starved MT ids:";
  for (int id : ids) msg += " " + std::to_string(id);
  return msg;
}

}  // namespace

StarvedMtError::StarvedMtError(std::vector<int> ids) : std::runtime_error(starved_message(ids)), ids_(std::move(ids)) {}

double pf_utility(std::span<const double> throughputs) {
  std::vector<int> starved;
  for (std::size_t u = 0; u < throughputs.size(); ++u) {
    if (!(throughputs[u] > 0.0)) starved.push_back(static_cast<int>(u));
  }
  if (!starved.empty()) throw StarvedMtError(std::move(starved));
  double sum = 0.0;
  for (const double x : throughputs) sum += std::log(x);
  return sum;
}

double jain_index(std::span<const double> throughputs) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double x : throughputs) {
    sum += x;
    sum_sq += x * x;
  }
  if (throughputs.empty() || sum_sq == 0.0) throw std::invalid_argument("Jain index undefined on an all-zero input");
  return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

RunMetrics aggregate(const Scheduler& sched, std::uint64_t slots, double utility_scale) {
  RunMetrics out;
  const auto delivered = sched.delivered_bits();
  out.mt_throughput.reserve(delivered.size());
  std::vector<double> scaled;
  scaled.reserve(delivered.size());
  for (const double bits : delivered) {
    const double x = bits / static_cast<double>(slots);
    out.mt_throughput.push_back(x);
    scaled.push_back(x * utility_scale);
    out.system_throughput += x;
  }
  out.pf_utility = pf_utility(scaled);
  out.jfi = jain_index(out.mt_throughput);
  out.ops = sched.counters();
  const auto s = static_cast<double>(slots);
  out.comparisons_per_slot = static_cast<double>(out.ops.comparisons) / s;
  out.additions_per_slot = static_cast<double>(out.ops.additions) / s;
  out.multiplications_per_slot = static_cast<double>(out.ops.multiplications) / s;
  out.messages_per_slot = static_cast<double>(out.ops.messages) / s;
  out.sync_events = sched.sync_events();
  return out;
}

}  // namespace dcsim

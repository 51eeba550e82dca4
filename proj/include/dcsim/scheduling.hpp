#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcsim/association.hpp"

namespace dcsim {

/// The four evaluated procedures: single connectivity + standard PF, dual +
/// independent standard PF, dual + coupled PF with controller sync, and
/// all-connectivity + global PF.
enum class Procedure { Scp, Dcsp, Dcp, Acp };

struct SchedulerConfig {
  double gamma = 0.01;              // moving-average weight
  std::uint64_t sync_period = 25;   // controller exchange period (slots) under Dcp
  double epsilon_init = 1.0;        // initial moving average, bits/slot
  std::uint64_t acp_sync_period = 1;  // totals refresh under Acp; 1 = exact global sums
};

struct ComplexityCounters {
  std::uint64_t comparisons = 0;
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t messages = 0;
};

/// Expected per-slot operation counts, assuming every BS serves at least one
/// MT and every MT holds 2 links (Dcp/Dcsp), 1 link (Scp) or N links (Acp).
struct ExpectedPerSlot {
  double comparisons = 0.0;
  double additions = 0.0;
  double multiplications = 0.0;
  double messages = 0.0;
};
ExpectedPerSlot count_operations(Procedure proc, int num_mts, int num_bs, std::uint64_t sync_period);

double pf_metric_standard(double rate, double avg);
double update_avg(double avg, double rate, bool scheduled, double gamma);

/// argmax of rates[i]/avgs[i]; empty candidate set selects nobody.
std::optional<std::size_t> select_index_standard(std::span<const double> rates, std::span<const double> avgs);
/// argmax of rates[i]/(avgs[i] + partner[i]); scratch must match the size.
std::optional<std::size_t> select_index_coupled(std::span<const double> rates, std::span<const double> avgs,
                                                std::span<const double> partner, std::span<double> scratch);

/// Per-slot scheduler for all BSs of one run. The caller fills each BS's
/// rate buffer, then run_slot() selects one MT per BS, delivers its bits,
/// applies the moving-average update to every tracked link, and performs the
/// controller exchange at period boundaries.
class Scheduler {
 public:
  Scheduler(Procedure proc, const AssociationMap& assoc, int num_bs, const SchedulerConfig& cfg);

  int num_bs() const { return static_cast<int>(bs_.size()); }
  int num_mts() const { return static_cast<int>(delivered_.size()); }
  std::span<const int> candidates(int bs) const { return bs_[static_cast<std::size_t>(bs)].mts; }
  std::span<double> rate_buffer(int bs) { return bs_[static_cast<std::size_t>(bs)].rates; }

  void run_slot();

  std::optional<int> selected(int bs) const { return bs_[static_cast<std::size_t>(bs)].selected_mt; }
  double delivered_bits(int mt) const { return delivered_[static_cast<std::size_t>(mt)]; }
  std::span<const double> delivered_bits() const { return delivered_; }
  std::uint64_t times_scheduled(int mt) const { return times_scheduled_[static_cast<std::size_t>(mt)]; }
  std::uint64_t slots_run() const { return slot_; }
  std::uint64_t sync_events() const { return syncs_; }
  const ComplexityCounters& counters() const { return counters_; }

  double avg_throughput(int bs, int mt) const;
  double partner_snapshot(int bs, int mt) const;

 private:
  struct BsState {
    std::vector<int> mts;  // candidate MT ids, ascending
    std::vector<double> rates;
    std::vector<double> avg;
    std::vector<double> partner;
    std::vector<double> den;
    std::optional<int> selected_mt;
    std::size_t selected_idx = 0;
  };

  void sync();
  int index_of(int bs, int mt) const;

  Procedure proc_;
  SchedulerConfig cfg_;
  bool coupled_ = false;
  std::uint64_t period_ = 0;  // 0 = no exchange
  std::vector<BsState> bs_;
  std::vector<std::vector<std::pair<int, int>>> links_;  // per MT: (bs, slot in bs arrays)
  std::vector<double> delivered_;
  std::vector<std::uint64_t> times_scheduled_;
  std::uint64_t slot_ = 0;
  std::uint64_t syncs_ = 0;
  ComplexityCounters counters_;
};

}  // namespace dcsim

#include "dcsim/scheduling.hpp"

#include <stdexcept>

#include "dcsim/kernels.hpp"

namespace dcsim {

// Operation accounting, mirrored by count_operations():
//  - selection: y-1 comparisons and y metric divisions (tallied as
//    multiplications) per BS with y candidates;
//  - moving average: 2 multiplications and 1 addition per tracked link per
//    slot, charged whether or not the indicator term fires;
//  - exchange: the controller spends deg-1 additions per MT to total that
//    MT's per-BS averages. The local-average-plus-snapshot add inside the
//    coupled metric is part of metric evaluation, not tallied separately.
// Message tally per exchange: a report in and a total out per serving BS
// (2*deg per MT) under Dcp; per-MT pairwise BS exchange (N*(N-1) per MT)
// under Acp, which has no controller.

ExpectedPerSlot count_operations(Procedure proc, int num_mts, int num_bs, std::uint64_t sync_period) {
  const double m = num_mts;
  const double n = num_bs;
  const double t = static_cast<double>(sync_period);
  switch (proc) {
    case Procedure::Scp:
      return {m - n, m, 3.0 * m, 0.0};
    case Procedure::Dcsp:
      return {2.0 * m - n, 2.0 * m, 6.0 * m, 0.0};
    case Procedure::Dcp:
      return {2.0 * m - n, 2.0 * m + m / t, 6.0 * m, 4.0 * m / t};
    case Procedure::Acp:
      return {n * (m - 1.0), n * m + (n - 1.0) * m / t, 3.0 * n * m, m * n * (n - 1.0) / t};
  }
  return {};
}

double pf_metric_standard(double rate, double avg) { return rate / avg; }

double update_avg(double avg, double rate, bool scheduled, double gamma) {
  double next = avg * (1.0 - gamma);
  if (scheduled) next += gamma * rate;
  return next;
}

std::optional<std::size_t> select_index_standard(std::span<const double> rates, std::span<const double> avgs) {
  const std::size_t idx = kernels::active().ratio_argmax(rates.data(), avgs.data(), rates.size());
  if (idx == kernels::kNoIndex) return std::nullopt;
  return idx;
}

std::optional<std::size_t> select_index_coupled(std::span<const double> rates, std::span<const double> avgs,
                                                std::span<const double> partner, std::span<double> scratch) {
  const auto& k = kernels::active();
  k.vec_add(avgs.data(), partner.data(), scratch.data(), avgs.size());
  const std::size_t idx = k.ratio_argmax(rates.data(), scratch.data(), rates.size());
  if (idx == kernels::kNoIndex) return std::nullopt;
  return idx;
}

Scheduler::Scheduler(Procedure proc, const AssociationMap& assoc, int num_bs, const SchedulerConfig& cfg)
    : proc_(proc), cfg_(cfg) {
  if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0) throw std::invalid_argument("gamma must be in (0,1)");
  if (cfg.epsilon_init <= 0.0) throw std::invalid_argument("epsilon_init must be positive");
  coupled_ = proc == Procedure::Dcp || proc == Procedure::Acp;
  if (proc == Procedure::Dcp) period_ = cfg.sync_period;
  if (proc == Procedure::Acp) period_ = cfg.acp_sync_period;

  bs_.resize(static_cast<std::size_t>(num_bs));
  const int num_mts = assoc.num_mts();
  links_.resize(static_cast<std::size_t>(num_mts));
  delivered_.assign(static_cast<std::size_t>(num_mts), 0.0);
  times_scheduled_.assign(static_cast<std::size_t>(num_mts), 0);

  for (int u = 0; u < num_mts; ++u) {
    for (int b : assoc.serving[static_cast<std::size_t>(u)]) {
      auto& state = bs_[static_cast<std::size_t>(b)];
      links_[static_cast<std::size_t>(u)].emplace_back(b, static_cast<int>(state.mts.size()));
      state.mts.push_back(u);  // u ascending, so candidate lists stay sorted
    }
  }
  for (auto& state : bs_) {
    const std::size_t n = state.mts.size();
    state.rates.assign(n, 0.0);
    state.avg.assign(n, cfg.epsilon_init);
    state.partner.assign(n, 0.0);  // nothing exchanged yet
    state.den.assign(n, 0.0);
  }
}

int Scheduler::index_of(int bs, int mt) const {
  for (const auto& [b, idx] : links_[static_cast<std::size_t>(mt)]) {
    if (b == bs) return idx;
  }
  throw std::out_of_range("link not tracked");
}

double Scheduler::avg_throughput(int bs, int mt) const {
  return bs_[static_cast<std::size_t>(bs)].avg[static_cast<std::size_t>(index_of(bs, mt))];
}

double Scheduler::partner_snapshot(int bs, int mt) const {
  return bs_[static_cast<std::size_t>(bs)].partner[static_cast<std::size_t>(index_of(bs, mt))];
}

void Scheduler::run_slot() {
  const auto& k = kernels::active();

  // Phase 1: every BS selects against the same frozen state.
  for (auto& state : bs_) {
    const std::size_t n = state.mts.size();
    state.selected_mt.reset();
    if (n == 0) continue;
    std::optional<std::size_t> pick;
    if (coupled_) {
      pick = select_index_coupled(state.rates, state.avg, state.partner, state.den);
    } else {
      pick = select_index_standard(state.rates, state.avg);
    }
    counters_.comparisons += n - 1;
    counters_.multiplications += n;
    if (pick) {
      state.selected_idx = *pick;
      state.selected_mt = state.mts[*pick];
    }
  }

  // Phase 2: deliver and apply the moving-average update to every link.
  for (auto& state : bs_) {
    const std::size_t n = state.mts.size();
    if (n == 0) continue;
    k.vec_scale(state.avg.data(), 1.0 - cfg_.gamma, n);
    counters_.additions += n;
    counters_.multiplications += 2 * n;
    if (state.selected_mt) {
      const double rate = state.rates[state.selected_idx];
      state.avg[state.selected_idx] += cfg_.gamma * rate;
      delivered_[static_cast<std::size_t>(*state.selected_mt)] += rate;
      ++times_scheduled_[static_cast<std::size_t>(*state.selected_mt)];
    }
  }

  ++slot_;
  if (period_ > 0 && slot_ % period_ == 0) sync();
}

void Scheduler::sync() {
  ++syncs_;
  for (const auto& links : links_) {
    const std::size_t deg = links.size();
    if (deg < 2) continue;
    if (deg == 2) {
      auto& first = bs_[static_cast<std::size_t>(links[0].first)];
      auto& second = bs_[static_cast<std::size_t>(links[1].first)];
      const auto i0 = static_cast<std::size_t>(links[0].second);
      const auto i1 = static_cast<std::size_t>(links[1].second);
      first.partner[i0] = second.avg[i1];
      second.partner[i1] = first.avg[i0];
      counters_.additions += 1;
    } else {
      double total = 0.0;
      for (const auto& [b, idx] : links) total += bs_[static_cast<std::size_t>(b)].avg[static_cast<std::size_t>(idx)];
      counters_.additions += deg - 1;
      for (const auto& [b, idx] : links) {
        auto& state = bs_[static_cast<std::size_t>(b)];
        state.partner[static_cast<std::size_t>(idx)] = total - state.avg[static_cast<std::size_t>(idx)];
      }
    }
    if (proc_ == Procedure::Dcp) counters_.messages += 2 * deg;
  }
  if (proc_ == Procedure::Acp) {
    const auto n = static_cast<std::uint64_t>(num_bs());
    counters_.messages += static_cast<std::uint64_t>(num_mts()) * n * (n - 1);
  }
}

}  // namespace dcsim

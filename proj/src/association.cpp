#include "dcsim/association.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dcsim {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_dual_feasible(int num_bs) {
  if (num_bs < 2) throw std::runtime_error("dual association needs at least 2 base stations");
}

// argmax over a column/row slice with lowest-index tie-break; charges
// size-1 comparisons to the counter.
template <typename Value>
int argmax_counted(int n, Value value, std::uint64_t& comparisons) {
  int best = -1;
  double best_v = kNegInf;
  for (int i = 0; i < n; ++i) {
    const double v = value(i);
    if (v == kNegInf) continue;
    if (best >= 0) ++comparisons;
    if (best < 0 || v > best_v) {
      best = i;
      best_v = v;
    }
  }
  return best;
}

}  // namespace

AssociationMap associate_best_rsrp(const Matrix& rsrp) {
  AssociationMap map;
  map.serving.resize(static_cast<std::size_t>(rsrp.cols));
  for (int u = 0; u < rsrp.cols; ++u) {
    const int best = argmax_counted(rsrp.rows, [&](int b) { return rsrp.at(b, u); }, map.rsrp_comparisons);
    map.serving[static_cast<std::size_t>(u)] = {best};
  }
  return map;
}

AssociationMap associate_uigo(const Matrix& rsrp, std::span<const Tier> tiers, const AssociationParams& params) {
  require_dual_feasible(rsrp.rows);
  AssociationMap map;
  map.serving.resize(static_cast<std::size_t>(rsrp.cols));

  for (int u = 0; u < rsrp.cols; ++u) {
    const int a1 = argmax_counted(rsrp.rows, [&](int b) { return rsrp.at(b, u); }, map.rsrp_comparisons);
    // best candidate outside {A1}
    const int cand = argmax_counted(
        rsrp.rows, [&](int b) { return b == a1 ? kNegInf : rsrp.at(b, u); }, map.rsrp_comparisons);
    int a2 = cand;
    if (tiers[static_cast<std::size_t>(cand)] == Tier::Macro) {
      // best pico outside {A1}; offload when the macro leads by less than h1
      const int pico = argmax_counted(
          rsrp.rows,
          [&](int b) { return (b == a1 || tiers[static_cast<std::size_t>(b)] == Tier::Macro) ? kNegInf : rsrp.at(b, u); },
          map.rsrp_comparisons);
      if (pico >= 0 && rsrp.at(cand, u) - rsrp.at(pico, u) < params.h1_db) a2 = pico;
    }
    map.serving[static_cast<std::size_t>(u)] = {a1, a2};
  }
  return map;
}

AssociationMap associate_bigu(const Matrix& rsrp, const AssociationParams& params) {
  require_dual_feasible(rsrp.rows);
  const int num_bs = rsrp.rows;
  const int num_mts = rsrp.cols;
  AssociationMap map;
  map.serving.assign(static_cast<std::size_t>(num_mts), {});

  Matrix working = rsrp;
  std::vector<int> remaining(static_cast<std::size_t>(num_mts), 2);
  int open_links = 2 * num_mts;
  const int max_rounds = params.bigu_max_rounds > 0 ? params.bigu_max_rounds : 10 * num_mts;

  for (int round = 0; round < max_rounds && open_links > 0; ++round) {
    for (int b = 0; b < num_bs && open_links > 0; ++b) {
      // saturated MTs and already-accepted links are out of the running
      const int picked = argmax_counted(
          num_mts, [&](int u) { return remaining[static_cast<std::size_t>(u)] > 0 ? working.at(b, u) : kNegInf; },
          map.rsrp_comparisons);
      if (picked < 0) continue;
      const int best_bs =
          argmax_counted(num_bs, [&](int c) { return working.at(c, picked); }, map.rsrp_comparisons);
      if (working.at(best_bs, picked) - working.at(b, picked) < params.h2_db) {
        map.serving[static_cast<std::size_t>(picked)].push_back(b);
        --remaining[static_cast<std::size_t>(picked)];
        --open_links;
        working.at(b, picked) = kNegInf;
      }
    }
  }

  if (open_links > 0) {
    // livelock guard: hand leftover links to the strongest BSs not yet serving the MT
    map.fallback_used = true;
    for (int u = 0; u < num_mts; ++u) {
      auto& serving = map.serving[static_cast<std::size_t>(u)];
      while (remaining[static_cast<std::size_t>(u)] > 0) {
        const int pick = argmax_counted(
            num_bs,
            [&](int b) {
              return std::find(serving.begin(), serving.end(), b) != serving.end() ? kNegInf : rsrp.at(b, u);
            },
            map.rsrp_comparisons);
        serving.push_back(pick);
        --remaining[static_cast<std::size_t>(u)];
      }
    }
  }
  return map;
}

namespace {

// Deferred acceptance with MTs proposing and per-BS capacity q. Preference
// orders are total (ties broken by id), so the outcome is order-independent.
std::vector<int> deferred_acceptance(const std::vector<std::vector<int>>& mt_pref,
                                     const std::vector<std::vector<int>>& bs_rank, int capacity,
                                     std::uint64_t& comparisons) {
  const int num_mts = static_cast<int>(mt_pref.size());
  std::vector<int> matched(static_cast<std::size_t>(num_mts), -1);
  std::vector<std::vector<int>> accepted(bs_rank.size());
  std::vector<std::size_t> next(static_cast<std::size_t>(num_mts), 0);
  std::deque<int> free_mts(static_cast<std::size_t>(num_mts));
  std::iota(free_mts.begin(), free_mts.end(), 0);

  while (!free_mts.empty()) {
    const int u = free_mts.front();
    free_mts.pop_front();
    if (next[static_cast<std::size_t>(u)] >= mt_pref[static_cast<std::size_t>(u)].size())
      throw std::runtime_error("stable matching infeasible: MT " + std::to_string(u) + " exhausted its list");
    const int b = mt_pref[static_cast<std::size_t>(u)][next[static_cast<std::size_t>(u)]++];
    auto& seats = accepted[static_cast<std::size_t>(b)];
    if (static_cast<int>(seats.size()) < capacity) {
      seats.push_back(u);
      matched[static_cast<std::size_t>(u)] = b;
      continue;
    }
    // full: keep the better-ranked of u and the current worst occupant
    auto worst = std::max_element(seats.begin(), seats.end(), [&](int lhs, int rhs) {
      ++comparisons;
      return bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(lhs)] <
             bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(rhs)];
    });
    ++comparisons;
    if (bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)] <
        bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(*worst)]) {
      const int evicted = *worst;
      *worst = u;
      matched[static_cast<std::size_t>(u)] = b;
      matched[static_cast<std::size_t>(evicted)] = -1;
      free_mts.push_back(evicted);
    } else {
      free_mts.push_back(u);
    }
  }
  return matched;
}

std::vector<int> sorted_by_rsrp_desc(int n, auto rsrp_of, std::uint64_t& comparisons) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    ++comparisons;
    if (rsrp_of(a) != rsrp_of(b)) return rsrp_of(a) > rsrp_of(b);
    return a < b;
  });
  return order;
}

}  // namespace

AssociationMap associate_sm(const Matrix& rsrp, const AssociationParams& params) {
  require_dual_feasible(rsrp.rows);
  const int num_bs = rsrp.rows;
  const int num_mts = rsrp.cols;
  const int capacity = (num_mts + num_bs - 1) / num_bs + params.sm_seat_slack;
  if (capacity * num_bs < num_mts) throw std::runtime_error("stable matching infeasible: not enough seats");

  AssociationMap map;
  map.serving.resize(static_cast<std::size_t>(num_mts));

  // round 1: straight RSRP preferences on both sides
  std::vector<std::vector<int>> mt_pref(static_cast<std::size_t>(num_mts));
  for (int u = 0; u < num_mts; ++u) {
    mt_pref[static_cast<std::size_t>(u)] =
        sorted_by_rsrp_desc(num_bs, [&](int b) { return rsrp.at(b, u); }, map.rsrp_comparisons);
  }
  std::vector<std::vector<int>> bs_rank(static_cast<std::size_t>(num_bs),
                                        std::vector<int>(static_cast<std::size_t>(num_mts)));
  for (int b = 0; b < num_bs; ++b) {
    const auto order = sorted_by_rsrp_desc(num_mts, [&](int u) { return rsrp.at(b, u); }, map.rsrp_comparisons);
    for (int pos = 0; pos < num_mts; ++pos) bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(order[pos])] = pos;
  }
  const auto first = deferred_acceptance(mt_pref, bs_rank, capacity, map.rsrp_comparisons);

  // round 2: each MT drops its first BS; BSs demote their round-1 MTs to the tail
  for (int u = 0; u < num_mts; ++u) {
    auto& pref = mt_pref[static_cast<std::size_t>(u)];
    std::erase(pref, first[static_cast<std::size_t>(u)]);
  }
  for (int b = 0; b < num_bs; ++b) {
    std::vector<int> fresh, held;
    const auto order = sorted_by_rsrp_desc(num_mts, [&](int u) { return rsrp.at(b, u); }, map.rsrp_comparisons);
    for (int u : order) (first[static_cast<std::size_t>(u)] == b ? held : fresh).push_back(u);
    int pos = 0;
    for (int u : fresh) bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)] = pos++;
    for (int u : held) bs_rank[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)] = pos++;
  }
  const auto second = deferred_acceptance(mt_pref, bs_rank, capacity, map.rsrp_comparisons);

  for (int u = 0; u < num_mts; ++u) {
    map.serving[static_cast<std::size_t>(u)] = {first[static_cast<std::size_t>(u)],
                                                second[static_cast<std::size_t>(u)]};
  }
  return map;
}

AssociationMap associate_all(int num_bs, int num_mts) {
  AssociationMap map;
  std::vector<int> everyone(static_cast<std::size_t>(num_bs));
  std::iota(everyone.begin(), everyone.end(), 0);
  map.serving.assign(static_cast<std::size_t>(num_mts), everyone);
  return map;
}

std::string association_csv(const AssociationMap& map, int num_bs) {
  std::string out = "mt_id,a1,a2\n";
  char row[64];
  for (int u = 0; u < map.num_mts(); ++u) {
    const auto& serving = map.serving[static_cast<std::size_t>(u)];
    int a1 = -1;
    int a2 = -1;
    if (static_cast<int>(serving.size()) == num_bs && num_bs > 2) {
      // all-connectivity: no meaningful pair to report
    } else {
      if (!serving.empty()) a1 = serving[0];
      if (serving.size() > 1) a2 = serving[1];
    }
    std::snprintf(row, sizeof(row), "%d,%d,%d\n", u, a1, a2);
    out += row;
  }
  return out;
}

}  // namespace dcsim

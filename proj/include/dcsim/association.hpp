#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcsim/types.hpp"

namespace dcsim {

struct AssociationParams {
  double h1_db = 10.0;  // offload threshold (user-initiated greedy)
  double h2_db = 10.0;  // acceptance threshold (BS-initiated greedy)
  int sm_seat_slack = 1;  // extra seats per BS beyond ceil(M/N)
  int bigu_max_rounds = 0;  // 0 -> 10*M
};

/// Per-MT ordered serving sets: one BS for single association, [A1, A2] for
/// dual, every BS for all-connectivity.
struct AssociationMap {
  std::vector<std::vector<int>> serving;     // indexed by MT id
  std::uint64_t rsrp_comparisons = 0;        // comparisons spent building it
  bool fallback_used = false;                // BS-initiated greedy hit its round bound

  int num_mts() const { return static_cast<int>(serving.size()); }
  int primary(int u) const { return serving[static_cast<std::size_t>(u)][0]; }
};

/// Strongest-RSRP single association (ties to the lowest BS id).
AssociationMap associate_best_rsrp(const Matrix& rsrp);

/// User-initiated greedy with offloading: A1 is the global best; the second
/// pick is diverted to the best pico when a macro candidate leads it by less
/// than h1 dB.
AssociationMap associate_uigo(const Matrix& rsrp, std::span<const Tier> tiers, const AssociationParams& params);

/// BS-initiated greedy with user feedback: BSs select MTs round-robin; an MT
/// accepts when the offer is within h2 dB of its best remaining BS.
AssociationMap associate_bigu(const Matrix& rsrp, const AssociationParams& params);

/// Two-round stable matching with q = ceil(M/N) + slack seats per BS,
/// MTs proposing; the second round excludes each MT's first BS.
AssociationMap associate_sm(const Matrix& rsrp, const AssociationParams& params);

/// Every MT connected to every BS.
AssociationMap associate_all(int num_bs, int num_mts);

/// "mt_id,a1,a2" rows; a2 is -1 for single association, both -1 for
/// all-connectivity.
std::string association_csv(const AssociationMap& map, int num_bs);

}  // namespace dcsim

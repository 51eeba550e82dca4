#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcsim/topology.hpp"
#include "dcsim/types.hpp"

namespace dcsim {

struct RadioConfig {
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 9.0;
  double slot_duration_s = 1e-3;
  // Links below this linear SINR carry nothing; 0 disables the floor.
  double min_sinr_linear = 0.0;
  // Path-loss distance clamp; keeps the loss finite for co-located nodes.
  double min_distance_m = 10.0;
};

// Macro and pico tiers run on separate carriers, so interference is co-tier
// only and noise is taken over the serving BS bandwidth.

double path_loss_db(Tier tier, double distance_km, double min_distance_m = 10.0);
double rsrp_dbm(const BaseStation& bs, const MobileTerminal& mt, const RadioConfig& cfg = {});
Matrix rsrp_matrix(const NetworkTopology& topo, const RadioConfig& cfg = {});
double noise_power_dbm(const RadioConfig& cfg, double bandwidth_hz);
double dbm_to_mw(double dbm);

/// Long-term state plus per-slot fading for every (BS, MT) link of one drop.
/// All randomness is counter-based on (fading_seed, bs, mt) at position
/// `slot`, so results do not depend on evaluation order.
class ChannelModel {
 public:
  ChannelModel(const NetworkTopology& topo, const RadioConfig& cfg, std::uint64_t fading_seed);

  int num_bs() const { return num_bs_; }
  int num_mts() const { return num_mts_; }

  /// Draws fading and refreshes link powers and co-tier sums for one slot.
  void compute_slot(std::uint64_t slot);

  /// Achievable rates (bits/slot) from BS k to the given MT columns,
  /// using the powers of the last compute_slot().
  void rates_for_bs(int k, std::span<const int> mts, double* out) const;

  /// Single-link view of the last computed slot (same arithmetic as the
  /// batched path).
  double rate(int k, int u) const;

  double fading_gain(int k, int u, std::uint64_t slot) const;
  double power_mw(int k, int u) const { return powers_.at(k, u); }
  double tier_sum_mw(Tier tier, int u) const { return tier_sums_.at(tier == Tier::Macro ? 0 : 1, u); }
  double noise_mw(int k) const { return noise_mw_[static_cast<std::size_t>(k)]; }
  double rate_coeff(int k) const { return rate_coeff_[static_cast<std::size_t>(k)]; }
  Tier tier_of(int k) const { return tiers_[static_cast<std::size_t>(k)]; }

 private:
  int num_bs_ = 0;
  int num_mts_ = 0;
  double min_sinr_ = 0.0;
  std::vector<Tier> tiers_;
  std::vector<double> noise_mw_;
  std::vector<double> rate_coeff_;
  Matrix rx_mw_;                   // fading-free received power
  std::vector<std::uint64_t> keys_;  // one stream per link
  std::vector<double> gains_;
  Matrix powers_;
  Matrix tier_sums_;  // row 0 macro, row 1 pico
  mutable std::vector<double> gather_p_;
  mutable std::vector<double> gather_sum_;
};

}  // namespace dcsim

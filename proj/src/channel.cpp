#include "dcsim/channel.hpp"

#include <cmath>
#include <numbers>

#include "dcsim/kernels.hpp"
#include "dcsim/rng.hpp"

namespace dcsim {

double path_loss_db(Tier tier, double distance_km, double min_distance_m) {
  const double d = std::max(distance_km, min_distance_m / 1000.0);
  if (tier == Tier::Macro) return 128.1 + 37.6 * std::log10(d);
  return 140.7 + 36.7 * std::log10(d);
}

double rsrp_dbm(const BaseStation& bs, const MobileTerminal& mt, const RadioConfig& cfg) {
  const double d_km = distance_m(bs.position, mt.position) / 1000.0;
  return bs.tx_power_dbm - path_loss_db(bs.tier, d_km, cfg.min_distance_m);
}

Matrix rsrp_matrix(const NetworkTopology& topo, const RadioConfig& cfg) {
  Matrix out(topo.num_bs(), topo.num_mts());
  for (int b = 0; b < topo.num_bs(); ++b) {
    for (int u = 0; u < topo.num_mts(); ++u) {
      out.at(b, u) = rsrp_dbm(topo.base_stations[b], topo.terminals[u], cfg);
    }
  }
  return out;
}

double noise_power_dbm(const RadioConfig& cfg, double bandwidth_hz) {
  return cfg.noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + cfg.noise_figure_db;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

ChannelModel::ChannelModel(const NetworkTopology& topo, const RadioConfig& cfg, std::uint64_t fading_seed)
    : num_bs_(topo.num_bs()),
      num_mts_(topo.num_mts()),
      min_sinr_(cfg.min_sinr_linear),
      rx_mw_(topo.num_bs(), topo.num_mts()),
      powers_(topo.num_bs(), topo.num_mts()),
      tier_sums_(2, topo.num_mts()) {
  tiers_.reserve(num_bs_);
  noise_mw_.reserve(num_bs_);
  rate_coeff_.reserve(num_bs_);
  keys_.resize(static_cast<std::size_t>(num_bs_) * num_mts_);
  gains_.resize(keys_.size());
  gather_p_.resize(static_cast<std::size_t>(num_mts_));
  gather_sum_.resize(static_cast<std::size_t>(num_mts_));

  const Matrix rsrp = rsrp_matrix(topo, cfg);
  for (int b = 0; b < num_bs_; ++b) {
    const auto& bs = topo.base_stations[b];
    tiers_.push_back(bs.tier);
    noise_mw_.push_back(dbm_to_mw(noise_power_dbm(cfg, bs.bandwidth_hz)));
    rate_coeff_.push_back(cfg.slot_duration_s * bs.bandwidth_hz / std::numbers::ln2);
    for (int u = 0; u < num_mts_; ++u) {
      rx_mw_.at(b, u) = dbm_to_mw(rsrp.at(b, u));
      keys_[static_cast<std::size_t>(b) * num_mts_ + u] =
          rng::stream_key(fading_seed, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(u));
    }
  }
}

void ChannelModel::compute_slot(std::uint64_t slot) {
  const auto& k = kernels::active();
  const std::size_t total = keys_.size();
  k.exp_gains(keys_.data(), slot, gains_.data(), total);
  k.vec_mul(rx_mw_.data.data(), gains_.data(), powers_.data.data(), total);
  std::fill(tier_sums_.data.begin(), tier_sums_.data.end(), 0.0);
  for (int b = 0; b < num_bs_; ++b) {
    double* acc = tier_sums_.row(tiers_[static_cast<std::size_t>(b)] == Tier::Macro ? 0 : 1);
    k.vec_acc(acc, powers_.row(b), static_cast<std::size_t>(num_mts_));
  }
}

void ChannelModel::rates_for_bs(int k, std::span<const int> mts, double* out) const {
  const double* p_row = powers_.row(k);
  const double* sums = tier_sums_.row(tiers_[static_cast<std::size_t>(k)] == Tier::Macro ? 0 : 1);
  const std::size_t n = mts.size();
  for (std::size_t i = 0; i < n; ++i) {
    gather_p_[i] = p_row[mts[i]];
    gather_sum_[i] = sums[mts[i]];
  }
  kernels::active().link_rates(gather_p_.data(), gather_sum_.data(), noise_mw_[static_cast<std::size_t>(k)],
                               rate_coeff_[static_cast<std::size_t>(k)], out, n);
  if (min_sinr_ > 0.0) {
    const double noise = noise_mw_[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < n; ++i) {
      const double sinr = gather_p_[i] / (noise + (gather_sum_[i] - gather_p_[i]));
      if (sinr < min_sinr_) out[i] = 0.0;
    }
  }
}

double ChannelModel::rate(int k, int u) const {
  double out = 0.0;
  const int mts[1] = {u};
  rates_for_bs(k, mts, &out);
  return out;
}

double ChannelModel::fading_gain(int k, int u, std::uint64_t slot) const {
  double gain = 0.0;
  const std::uint64_t key = keys_[static_cast<std::size_t>(k) * num_mts_ + u];
  kernels::active().exp_gains(&key, slot, &gain, 1);
  return gain;
}

}  // namespace dcsim

#pragma once

#include <cstdint>
#include <vector>

#include "dcsim/types.hpp"

namespace dcsim {

struct BaseStation {
  int id = 0;
  Tier tier = Tier::Macro;
  Vec2 position;
  double tx_power_dbm = 46.0;    // 46 macro, 30 pico
  double antenna_height_m = 32.0;  // 32 macro, 10 pico
  double bandwidth_hz = 5e6;
};

struct MobileTerminal {
  int id = 0;
  Vec2 position;
  bool hotspot = false;  // dropped (or landed) inside a pico disc
};

/// One deployment drop. Scenarios:
///   1: fixed pico ring, hotspot MT drop     2: fixed pico ring, uniform MT drop
///   3: random pico placement, hotspot drop  4: random pico placement, uniform drop
struct ScenarioSpec {
  int scenario_id = 1;
  int num_mts = 30;
  std::uint64_t seed = 0;
  double macro_isd_m = 500.0;
  double pico_radius_m = 80.0;
  int picos_per_macro = 3;
  int num_macros = 3;  // 1..3 supported; !=3 only used for degenerate test setups
};

struct NetworkTopology {
  std::vector<BaseStation> base_stations;  // macros first, then picos; id == index
  std::vector<MobileTerminal> terminals;   // id == index
  double macro_coverage_radius_m = 250.0;
  int num_macros = 3;

  int num_bs() const { return static_cast<int>(base_stations.size()); }
  int num_mts() const { return static_cast<int>(terminals.size()); }
};

/// Disc radius used for MT drops; half the inter-site distance.
double macro_coverage_radius(const ScenarioSpec& spec);

/// Deterministic in spec (including seed). Throws std::invalid_argument on
/// num_mts < 1, pico_radius >= coverage radius, or unsupported field values.
NetworkTopology generate_topology(const ScenarioSpec& spec);

}  // namespace dcsim

#include "dcsim/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dcsim/rng.hpp"

namespace dcsim {
namespace {

constexpr double kMacroTxDbm = 46.0;
constexpr double kPicoTxDbm = 30.0;
constexpr double kMacroHeightM = 32.0;
constexpr double kPicoHeightM = 10.0;
constexpr double kBandwidthHz = 5e6;

// Fixed pico ring for scenarios 1-2: radius and bearings chosen so that all
// pico discs are pairwise disjoint and stay inside the parent macro disc.
constexpr double kPicoRingRadiusM = 160.0;
constexpr double kPicoRingAnglesDeg[3] = {30.0, 150.0, 270.0};

std::vector<Vec2> macro_sites(int count, double isd) {
  // equilateral triangle with side == ISD; fewer sites keep the same spacing
  const double h = isd * std::numbers::sqrt3 / 2.0;
  std::vector<Vec2> all = {{0.0, 0.0}, {isd, 0.0}, {isd / 2.0, h}};
  all.resize(static_cast<std::size_t>(count));
  return all;
}

Vec2 uniform_in_disc(rng::Stream& stream, Vec2 center, double radius) {
  const double r = radius * std::sqrt(stream.next_unit());
  const double theta = 2.0 * std::numbers::pi * stream.next_unit();
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

bool inside_any_pico(Vec2 p, const std::vector<BaseStation>& stations, int num_macros, double pico_radius) {
  for (std::size_t i = num_macros; i < stations.size(); ++i) {
    if (distance_m(p, stations[i].position) <= pico_radius) return true;
  }
  return false;
}

}  // namespace

double macro_coverage_radius(const ScenarioSpec& spec) { return spec.macro_isd_m / 2.0; }

NetworkTopology generate_topology(const ScenarioSpec& spec) {
  if (spec.scenario_id < 1 || spec.scenario_id > 4)
    throw std::invalid_argument("scenario_id must be 1..4, got " + std::to_string(spec.scenario_id));
  if (spec.num_mts < 1) throw std::invalid_argument("num_mts must be >= 1");
  if (spec.num_macros < 1 || spec.num_macros > 3)
    throw std::invalid_argument("num_macros must be 1..3");
  if (spec.picos_per_macro < 0) throw std::invalid_argument("picos_per_macro must be >= 0");
  const double coverage = macro_coverage_radius(spec);
  if (spec.pico_radius_m >= coverage)
    throw std::invalid_argument("pico_radius must be smaller than the macro coverage radius");

  NetworkTopology topo;
  topo.macro_coverage_radius_m = coverage;
  topo.num_macros = spec.num_macros;

  const auto sites = macro_sites(spec.num_macros, spec.macro_isd_m);
  for (const Vec2 site : sites) {
    BaseStation bs;
    bs.id = topo.num_bs();
    bs.tier = Tier::Macro;
    bs.position = site;
    bs.tx_power_dbm = kMacroTxDbm;
    bs.antenna_height_m = kMacroHeightM;
    bs.bandwidth_hz = kBandwidthHz;
    topo.base_stations.push_back(bs);
  }

  rng::Stream pico_stream(rng::stream_key(spec.seed, 0xB5, spec.scenario_id));
  const bool fixed_picos = spec.scenario_id <= 2;
  for (const Vec2 site : sites) {
    for (int i = 0; i < spec.picos_per_macro; ++i) {
      Vec2 pos;
      if (fixed_picos) {
        const double a = kPicoRingAnglesDeg[i % 3] * std::numbers::pi / 180.0;
        pos = {site.x + kPicoRingRadiusM * std::cos(a), site.y + kPicoRingRadiusM * std::sin(a)};
      } else {
        // random placement; keep the whole pico disc inside the coverage disc
        pos = uniform_in_disc(pico_stream, site, coverage - spec.pico_radius_m);
      }
      BaseStation bs;
      bs.id = topo.num_bs();
      bs.tier = Tier::Pico;
      bs.position = pos;
      bs.tx_power_dbm = kPicoTxDbm;
      bs.antenna_height_m = kPicoHeightM;
      bs.bandwidth_hz = kBandwidthHz;
      topo.base_stations.push_back(bs);
    }
  }
  const int num_picos = topo.num_bs() - spec.num_macros;

  rng::Stream mt_stream(rng::stream_key(spec.seed, 0x117, spec.scenario_id));
  const bool hotspot_drop = spec.scenario_id == 1 || spec.scenario_id == 3;
  const int num_hotspot = hotspot_drop && num_picos > 0
                              ? static_cast<int>((2 * static_cast<long long>(spec.num_mts) + 2) / 3)
                              : 0;

  for (int u = 0; u < spec.num_mts; ++u) {
    Vec2 pos;
    if (u < num_hotspot) {
      const auto pico = static_cast<int>(mt_stream.next_below(static_cast<std::uint64_t>(num_picos)));
      pos = uniform_in_disc(mt_stream, topo.base_stations[spec.num_macros + pico].position, spec.pico_radius_m);
    } else {
      // uniform over macro discs; hotspot scenarios additionally exclude pico coverage
      do {
        const auto macro = static_cast<int>(mt_stream.next_below(static_cast<std::uint64_t>(spec.num_macros)));
        pos = uniform_in_disc(mt_stream, sites[macro], coverage);
      } while (hotspot_drop && inside_any_pico(pos, topo.base_stations, spec.num_macros, spec.pico_radius_m));
    }
    MobileTerminal mt;
    mt.id = u;
    mt.position = pos;
    mt.hotspot = inside_any_pico(pos, topo.base_stations, spec.num_macros, spec.pico_radius_m);
    topo.terminals.push_back(mt);
  }

  return topo;
}

}  // namespace dcsim

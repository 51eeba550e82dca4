#include "dcsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "dcsim/rng.hpp"

namespace dcsim {
namespace {

constexpr std::uint64_t kTopologyTag = 0x70;
constexpr std::uint64_t kFadingTag = 0xFA;

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

bool needs_association(Procedure proc) { return proc == Procedure::Dcsp || proc == Procedure::Dcp; }

AssociationMap build_association(const ExperimentConfig& cfg, const RunSpec& spec, const NetworkTopology& topo,
                                 const Matrix& rsrp) {
  if (spec.proc == Procedure::Scp) return associate_best_rsrp(rsrp);
  if (spec.proc == Procedure::Acp) return associate_all(topo.num_bs(), topo.num_mts());
  switch (spec.assoc) {
    case AssocAlgo::BestRsrp:
      return associate_best_rsrp(rsrp);
    case AssocAlgo::Uigo: {
      std::vector<Tier> tiers(static_cast<std::size_t>(topo.num_bs()));
      for (int b = 0; b < topo.num_bs(); ++b) tiers[static_cast<std::size_t>(b)] = topo.base_stations[b].tier;
      return associate_uigo(rsrp, tiers, cfg.assoc_params);
    }
    case AssocAlgo::Bigu:
      return associate_bigu(rsrp, cfg.assoc_params);
    case AssocAlgo::Sm:
      return associate_sm(rsrp, cfg.assoc_params);
    case AssocAlgo::All:
      return associate_all(topo.num_bs(), topo.num_mts());
  }
  throw std::logic_error("unreachable");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream stream(value);
  while (std::getline(stream, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = item.find_last_not_of(" \t");
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

}  // namespace

std::string to_string(Procedure proc) {
  switch (proc) {
    case Procedure::Scp:
      return "scp";
    case Procedure::Dcsp:
      return "dcsp";
    case Procedure::Dcp:
      return "dcp";
    case Procedure::Acp:
      return "acp";
  }
  return "?";
}

std::string to_string(AssocAlgo algo) {
  switch (algo) {
    case AssocAlgo::BestRsrp:
      return "best";
    case AssocAlgo::Uigo:
      return "uigo";
    case AssocAlgo::Bigu:
      return "bigu";
    case AssocAlgo::Sm:
      return "sm";
    case AssocAlgo::All:
      return "all";
  }
  return "?";
}

Procedure procedure_from_string(const std::string& name) {
  if (name == "scp") return Procedure::Scp;
  if (name == "dcsp") return Procedure::Dcsp;
  if (name == "dcp") return Procedure::Dcp;
  if (name == "acp") return Procedure::Acp;
  throw std::invalid_argument("unknown procedure '" + name + "' (expected scp, dcsp, dcp or acp)");
}

AssocAlgo assoc_from_string(const std::string& name) {
  if (name == "best") return AssocAlgo::BestRsrp;
  if (name == "uigo") return AssocAlgo::Uigo;
  if (name == "bigu") return AssocAlgo::Bigu;
  if (name == "sm") return AssocAlgo::Sm;
  if (name == "all") return AssocAlgo::All;
  throw std::invalid_argument("unknown association '" + name + "' (expected best, uigo, bigu, sm or all)");
}

void ExperimentConfig::validate() const {
  if (scenario_id < 1 || scenario_id > 4) throw std::invalid_argument("scenario must be 1..4");
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (procedures.empty()) throw std::invalid_argument("at least one procedure is required");
  if (mt_counts.empty()) throw std::invalid_argument("at least one MT count is required");
  for (int m : mt_counts) {
    if (m < 1) throw std::invalid_argument("MT counts must be >= 1");
  }
  const bool wants_dual = std::any_of(procedures.begin(), procedures.end(), needs_association);
  if (wants_dual && associations.empty())
    throw std::invalid_argument("dual-connectivity procedures need at least one association algorithm");
  for (AssocAlgo algo : associations) {
    if (algo == AssocAlgo::All)
      throw std::invalid_argument("'all' is implied by acp and is not a dual association choice");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (utility_unit_bps <= 0.0) throw std::invalid_argument("utility_unit_bps must be positive");
  if (sched.sync_period < 1) throw std::invalid_argument("sync_period must be >= 1");
  if (sched.acp_sync_period < 1) throw std::invalid_argument("acp_sync_period must be >= 1");
}

std::string RunSpec::run_id() const {
  return format("s%d-m%d-%s-%s-r%d", scenario_id, num_mts, to_string(proc).c_str(), to_string(assoc).c_str(),
                replication);
}

std::vector<RunSpec> enumerate_runs(const ExperimentConfig& cfg) {
  std::vector<RunSpec> runs;
  for (int m : cfg.mt_counts) {
    for (Procedure proc : cfg.procedures) {
      std::vector<AssocAlgo> algos;
      if (proc == Procedure::Scp) {
        algos = {AssocAlgo::BestRsrp};
      } else if (proc == Procedure::Acp) {
        algos = {AssocAlgo::All};
      } else {
        algos = cfg.associations;
      }
      for (AssocAlgo algo : algos) {
        for (int rep = 0; rep < cfg.replications; ++rep) {
          RunSpec spec;
          spec.scenario_id = cfg.scenario_id;
          spec.num_mts = m;
          spec.proc = proc;
          spec.assoc = algo;
          spec.replication = rep;
          // one stochastic cell per (scenario, M, rep): procedures are
          // compared on identical drops and fading
          spec.seed = rng::stream_key(cfg.base_seed, static_cast<std::uint64_t>(cfg.scenario_id),
                                      static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(rep));
          runs.push_back(spec);
        }
      }
    }
  }
  return runs;
}

RunResult run_single(const ExperimentConfig& cfg, const RunSpec& spec) {
  ScenarioSpec scenario = cfg.geometry;
  scenario.scenario_id = spec.scenario_id;
  scenario.num_mts = spec.num_mts;
  scenario.seed = rng::stream_key(spec.seed, kTopologyTag);

  const NetworkTopology topo = generate_topology(scenario);
  const Matrix rsrp = rsrp_matrix(topo, cfg.radio);
  const AssociationMap assoc = build_association(cfg, spec, topo, rsrp);

  Scheduler sched(spec.proc, assoc, topo.num_bs(), cfg.sched);
  ChannelModel channel(topo, cfg.radio, rng::stream_key(spec.seed, kFadingTag));

  for (std::uint64_t t = 0; t < cfg.slots; ++t) {
    channel.compute_slot(t);
    for (int b = 0; b < topo.num_bs(); ++b) {
      const auto mts = sched.candidates(b);
      if (!mts.empty()) channel.rates_for_bs(b, mts, sched.rate_buffer(b).data());
    }
    sched.run_slot();
  }

  RunResult result;
  result.spec = spec;
  result.metrics = aggregate(sched, cfg.slots, 1.0 / (cfg.radio.slot_duration_s * cfg.utility_unit_bps));
  result.assoc_fallback = assoc.fallback_used;
  result.assoc_pairs.reserve(static_cast<std::size_t>(topo.num_mts()));
  for (int u = 0; u < topo.num_mts(); ++u) {
    const auto& serving = assoc.serving[static_cast<std::size_t>(u)];
    std::array<int, 2> pair = {-1, -1};
    if (static_cast<int>(serving.size()) != topo.num_bs() || topo.num_bs() <= 2) {
      if (!serving.empty()) pair[0] = serving[0];
      if (serving.size() > 1) pair[1] = serving[1];
    }
    result.assoc_pairs.push_back(pair);
  }
  return result;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  kernels::set_backend(cfg.backend);
  const std::vector<RunSpec> runs = enumerate_runs(cfg);
  std::vector<RunResult> results(runs.size());

  const int workers = std::min<int>(cfg.threads, static_cast<int>(runs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < runs.size(); ++i) results[i] = run_single(cfg, runs[i]);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= runs.size()) return;
        try {
          results[i] = run_single(cfg, runs[i]);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

std::string summary_csv(const std::vector<RunResult>& results) {
  std::string out =
      "scenario,num_mts,procedure,association,replication,seed,pf_utility,system_throughput_bits_per_slot,"
      "jfi,comparisons_per_slot,additions_per_slot,multiplications_per_slot,messages_per_slot,sync_events,"
      "assoc_fallback\n";
  for (const auto& r : results) {
    out += format("%d,%d,%s,%s,%d,%llu,", r.spec.scenario_id, r.spec.num_mts, to_string(r.spec.proc).c_str(),
                  to_string(r.spec.assoc).c_str(), r.spec.replication,
                  static_cast<unsigned long long>(r.spec.seed));
    out += format("%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%llu,%d\n", r.metrics.pf_utility,
                  r.metrics.system_throughput, r.metrics.jfi, r.metrics.comparisons_per_slot,
                  r.metrics.additions_per_slot, r.metrics.multiplications_per_slot, r.metrics.messages_per_slot,
                  static_cast<unsigned long long>(r.metrics.sync_events), r.assoc_fallback ? 1 : 0);
  }
  return out;
}

std::string per_mt_csv(const std::vector<RunResult>& results) {
  std::string out = "run_id,mt_id,x_u,a1,a2\n";
  for (const auto& r : results) {
    const std::string id = r.spec.run_id();
    for (std::size_t u = 0; u < r.metrics.mt_throughput.size(); ++u) {
      out += format("%s,%zu,%.6f,%d,%d\n", id.c_str(), u, r.metrics.mt_throughput[u], r.assoc_pairs[u][0],
                    r.assoc_pairs[u][1]);
    }
  }
  return out;
}

std::string summary_table(const std::vector<RunResult>& results) {
  struct Cell {
    std::vector<double> utilities;
    double throughput = 0.0;
    double jfi = 0.0;
    double messages = 0.0;
  };
  std::map<std::tuple<int, int, std::string, std::string>, Cell> cells;
  for (const auto& r : results) {
    auto& cell = cells[{r.spec.scenario_id, r.spec.num_mts, to_string(r.spec.proc), to_string(r.spec.assoc)}];
    cell.utilities.push_back(r.metrics.pf_utility);
    cell.throughput += r.metrics.system_throughput;
    cell.jfi += r.metrics.jfi;
    cell.messages += r.metrics.messages_per_slot;
  }

  std::string out = format("%-9s %-5s %-10s %-6s %-20s %-18s %-8s %-10s\n", "scenario", "mts", "procedure",
                           "assoc", "pf_utility(mean+/-sd)", "tput(Mbit/s)", "jfi", "msgs/slot");
  for (const auto& [key, cell] : cells) {
    const auto n = static_cast<double>(cell.utilities.size());
    double mean = 0.0;
    for (double v : cell.utilities) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : cell.utilities) var += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out += format("%-9d %-5d %-10s %-6s %9.3f +/- %-7.3f %-18.3f %-8.4f %-10.2f\n", std::get<0>(key),
                  std::get<1>(key), std::get<2>(key).c_str(), std::get<3>(key).c_str(), mean, sd,
                  cell.throughput / n * 1e-3, cell.jfi / n, cell.messages / n);
  }
  return out;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                        const std::string& value) {
  const auto as_int = [&] { return std::stoi(value); };
  const auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
  const auto as_double = [&] { return std::stod(value); };

  if (section == "experiment" || section.empty()) {
    if (key == "scenario") {
      cfg.scenario_id = as_int();
    } else if (key == "mts") {
      cfg.mt_counts.clear();
      for (const auto& item : split_list(value)) cfg.mt_counts.push_back(std::stoi(item));
    } else if (key == "procedures") {
      cfg.procedures.clear();
      for (const auto& item : split_list(value)) cfg.procedures.push_back(procedure_from_string(item));
    } else if (key == "associations") {
      cfg.associations.clear();
      for (const auto& item : split_list(value)) cfg.associations.push_back(assoc_from_string(item));
    } else if (key == "slots") {
      cfg.slots = as_u64();
    } else if (key == "replications") {
      cfg.replications = as_int();
    } else if (key == "seed") {
      cfg.base_seed = as_u64();
    } else if (key == "utility_unit_bps") {
      cfg.utility_unit_bps = as_double();
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "threads") {
      cfg.threads = as_int();
    } else if (key == "kernels") {
      if (value == "auto") {
        cfg.backend = kernels::Backend::Auto;
      } else if (value == "scalar") {
        cfg.backend = kernels::Backend::Scalar;
      } else if (value == "avx2") {
        cfg.backend = kernels::Backend::Avx2;
      } else {
        throw std::invalid_argument("kernels must be auto, scalar or avx2");
      }
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in [experiment]");
    }
  } else if (section == "scheduler") {
    if (key == "gamma") {
      cfg.sched.gamma = as_double();
    } else if (key == "sync_period") {
      cfg.sched.sync_period = as_u64();
    } else if (key == "epsilon_init") {
      cfg.sched.epsilon_init = as_double();
    } else if (key == "acp_sync_period") {
      cfg.sched.acp_sync_period = as_u64();
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in [scheduler]");
    }
  } else if (section == "association") {
    if (key == "h1") {
      cfg.assoc_params.h1_db = as_double();
    } else if (key == "h2") {
      cfg.assoc_params.h2_db = as_double();
    } else if (key == "sm_seat_slack") {
      cfg.assoc_params.sm_seat_slack = as_int();
    } else if (key == "bigu_max_rounds") {
      cfg.assoc_params.bigu_max_rounds = as_int();
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in [association]");
    }
  } else if (section == "radio") {
    if (key == "noise_density_dbm_hz") {
      cfg.radio.noise_density_dbm_hz = as_double();
    } else if (key == "noise_figure_db") {
      cfg.radio.noise_figure_db = as_double();
    } else if (key == "slot_duration_s") {
      cfg.radio.slot_duration_s = as_double();
    } else if (key == "min_sinr") {
      cfg.radio.min_sinr_linear = as_double();
    } else if (key == "min_distance_m") {
      cfg.radio.min_distance_m = as_double();
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in [radio]");
    }
  } else if (section == "geometry") {
    if (key == "macro_isd_m") {
      cfg.geometry.macro_isd_m = as_double();
    } else if (key == "pico_radius_m") {
      cfg.geometry.pico_radius_m = as_double();
    } else if (key == "picos_per_macro") {
      cfg.geometry.picos_per_macro = as_int();
    } else if (key == "num_macros") {
      cfg.geometry.num_macros = as_int();
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in [geometry]");
    }
  } else {
    throw std::invalid_argument("unknown config section '" + section + "'");
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(cfg, section, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace dcsim

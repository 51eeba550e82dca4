#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dcsim/association.hpp"
#include "dcsim/channel.hpp"
#include "dcsim/kernels.hpp"
#include "dcsim/metrics.hpp"
#include "dcsim/scheduling.hpp"
#include "dcsim/topology.hpp"

namespace dcsim {

enum class AssocAlgo { BestRsrp, Uigo, Bigu, Sm, All };

std::string to_string(Procedure proc);
std::string to_string(AssocAlgo algo);
Procedure procedure_from_string(const std::string& name);
AssocAlgo assoc_from_string(const std::string& name);

struct ExperimentConfig {
  int scenario_id = 1;
  std::vector<int> mt_counts = {30, 60, 90};
  std::vector<Procedure> procedures = {Procedure::Scp, Procedure::Dcsp, Procedure::Dcp, Procedure::Acp};
  std::vector<AssocAlgo> associations = {AssocAlgo::Uigo, AssocAlgo::Bigu, AssocAlgo::Sm};  // Dcsp/Dcp only
  std::uint64_t slots = 10000;
  int replications = 10;
  std::uint64_t base_seed = 1;
  SchedulerConfig sched;
  AssociationParams assoc_params;
  RadioConfig radio;
  ScenarioSpec geometry;  // scenario_id, num_mts and seed are filled per run
  // PF utility is taken on x_u / utility_unit; the default (10 Mbit/s)
  // keeps per-MT logs in the regime where utility falls as MTs are added.
  double utility_unit_bps = 1e7;
  std::string output_dir = "out";
  int threads = 1;
  kernels::Backend backend = kernels::Backend::Auto;

  void validate() const;  // throws std::invalid_argument
};

struct RunSpec {
  int scenario_id = 1;
  int num_mts = 0;
  Procedure proc = Procedure::Scp;
  AssocAlgo assoc = AssocAlgo::BestRsrp;
  int replication = 0;
  std::uint64_t seed = 0;  // shared by all procedures of one (scenario, M, rep) cell

  std::string run_id() const;
};

struct RunResult {
  RunSpec spec;
  RunMetrics metrics;
  std::vector<std::array<int, 2>> assoc_pairs;  // per MT (a1, a2); -1 where not applicable
  bool assoc_fallback = false;
};

std::vector<RunSpec> enumerate_runs(const ExperimentConfig& cfg);
RunResult run_single(const ExperimentConfig& cfg, const RunSpec& spec);

/// Full grid in enumeration order; `threads` workers share nothing, so the
/// results are identical regardless of parallelism.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg);

std::string summary_csv(const std::vector<RunResult>& results);
std::string per_mt_csv(const std::vector<RunResult>& results);
std::string summary_table(const std::vector<RunResult>& results);

/// INI-style config: "[section]" headers, "key = value" lines, '#' comments.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                        const std::string& value);

}  // namespace dcsim

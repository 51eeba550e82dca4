#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dcsim/engine.hpp"

namespace fs = std::filesystem;

namespace {

void write_file_atomic(const fs::path& target, const std::string& body) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slot-level downlink simulator for PF scheduling with dual connectivity in two-tier HetNets"};

  std::string config_path;
  std::optional<int> scenario;
  std::optional<std::string> mts, procedures, associations, kernels_choice;
  std::optional<std::uint64_t> slots, seed, sync_period;
  std::optional<int> reps, threads;
  std::optional<double> gamma, h1, h2;
  std::optional<std::string> out_dir;

  app.add_option("--config", config_path, "config file (INI-style key = value sections)");
  app.add_option("--scenario", scenario, "deployment scenario 1..4");
  app.add_option("--mts", mts, "comma-separated MT counts, e.g. 30,60,90");
  app.add_option("--procedure", procedures, "comma-separated subset of scp,dcsp,dcp,acp");
  app.add_option("--association", associations, "comma-separated subset of best,uigo,bigu,sm");
  app.add_option("--slots", slots, "slots per run");
  app.add_option("--reps", reps, "replications per grid point");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--sync-period", sync_period, "controller exchange period (slots)");
  app.add_option("--gamma", gamma, "moving-average weight in (0,1)");
  app.add_option("--h1", h1, "offload threshold (dB)");
  app.add_option("--h2", h2, "acceptance threshold (dB)");
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_option("--threads", threads, "worker threads over grid points");
  app.add_option("--kernels", kernels_choice, "auto, scalar or avx2");

  CLI11_PARSE(app, argc, argv);

  fs::path summary_path, per_mt_path;
  try {
    dcsim::ExperimentConfig cfg =
        config_path.empty() ? dcsim::ExperimentConfig{} : dcsim::load_config_file(config_path);

    if (scenario) cfg.scenario_id = *scenario;
    if (mts) dcsim::apply_config_entry(cfg, "experiment", "mts", *mts);
    if (procedures) dcsim::apply_config_entry(cfg, "experiment", "procedures", *procedures);
    if (associations) dcsim::apply_config_entry(cfg, "experiment", "associations", *associations);
    if (slots) cfg.slots = *slots;
    if (reps) cfg.replications = *reps;
    if (seed) cfg.base_seed = *seed;
    if (sync_period) cfg.sched.sync_period = *sync_period;
    if (gamma) cfg.sched.gamma = *gamma;
    if (h1) cfg.assoc_params.h1_db = *h1;
    if (h2) cfg.assoc_params.h2_db = *h2;
    if (out_dir) cfg.output_dir = *out_dir;
    if (threads) cfg.threads = *threads;
    if (kernels_choice) dcsim::apply_config_entry(cfg, "experiment", "kernels", *kernels_choice);
    cfg.validate();

    const auto results = dcsim::run_experiment(cfg);

    fs::create_directories(cfg.output_dir);
    summary_path = fs::path(cfg.output_dir) / "summary.csv";
    per_mt_path = fs::path(cfg.output_dir) / "per_mt.csv";
    write_file_atomic(summary_path, dcsim::summary_csv(results));
    write_file_atomic(per_mt_path, dcsim::per_mt_csv(results));

    std::cout << dcsim::summary_table(results);
    std::cout << "kernels: " << dcsim::kernels::backend_name() << "\n";
    std::cout << "wrote " << summary_path.string() << " and " << per_mt_path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    for (const auto& p : {summary_path, per_mt_path}) {
      if (!p.empty()) {
        std::error_code ec;
        fs::remove(fs::path(p.string() + ".tmp"), ec);
      }
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// commtrust: run scenarios, sweeps and the bandwidth check from the shell.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commtrust/error.hpp"
#include "commtrust/metrics.hpp"
#include "commtrust/scenario.hpp"
#include "commtrust/simulation.hpp"
#include "commtrust/sweep.hpp"

namespace ct = commtrust;

namespace {

void print_overhead(const std::string& label, const ct::OverheadRecord& o) {
  std::cout << label << "call-out " << o.call_out_bits << " bits, MAC block " << o.mac_block_bits
            << " bits, verification " << o.verification_bits << " bits, total " << o.total_bits
            << " bits (" << (o.total_bits < 10000 ? "< 10000" : ">= 10000") << ")\n";
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out) {
  auto scenario = ct::load_scenario(path);
  if (seed) scenario.seed = *seed;
  const auto result = ct::run(scenario);
  const auto& m = result.metrics;
  std::cout << "scenario " << scenario.name << " seed " << scenario.seed << '\n'
            << "events " << result.log.size() << ", digest " << m.event_log_digest << '\n';
  if (m.auth_bound) {
    std::cout << "trials " << m.auth_bound->trials << ", accepted " << m.auth_bound->accepted
              << ", rate " << m.auth_bound->acceptance_rate() << '\n';
  } else {
    std::cout << "epochs " << m.epochs.size() << ", retrievals " << m.retrievals.size()
              << ", final infections " << m.final_infections() << '\n'
              << "acceptance rate " << m.acceptance_rate() << ", tampered acceptance "
              << m.tampered_acceptance_rate() << '\n';
    if (auto h = m.final_homophily()) std::cout << "final homophily " << *h << '\n';
  }
  if (!out.empty()) {
    ct::write_run_directory(out, result.log, m);
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& grid_path, std::size_t workers,
              const std::string& out) {
  const auto scenario = ct::load_scenario(path);
  const auto grid = ct::load_grid(grid_path);
  const auto table = ct::sweep_csv(ct::sweep(scenario, grid, workers));
  if (out.empty()) {
    std::cout << table;
  } else {
    std::ofstream(out) << table;
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int cmd_verify_bandwidth(std::size_t peers, int width) {
  std::cout << "peers " << peers << ", width " << width << " bits\n";
  print_overhead("closed form: ", ct::bandwidth_estimate(peers, peers, width));
  const auto result = ct::run(ct::bandwidth_scenario(peers, width));
  if (result.metrics.retrievals.size() != 1) {
    std::cerr << "error: expected one simulated retrieval\n";
    return 1;
  }
  const auto& r = result.metrics.retrievals.front();
  std::cout << "simulated:   " << r.replies << " replies, "
            << (r.decision ? r.decision->total_polled : 0) << " verifiers, install from "
            << ct::to_string(r.installed_from) << '\n';
  print_overhead("simulated:   ", r.overhead);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community trust simulator for app retrieval"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out, "Write events, metrics and tables into this directory");

  std::string grid_path;
  std::size_t workers = 1;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("scenario", scenario_path, "Base scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid_path, "Grid file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Write the table here instead of stdout");

  std::size_t peers = 10;
  int width = ct::kDefaultDigestBits;
  auto* bw = app.add_subcommand("verify-bandwidth", "Protocol overhead for one retrieval");
  bw->add_option("--peers", peers, "Responders and verifiers")->check(CLI::Range(1, 1000));
  bw->add_option("--width", width, "Digest width in bits")->check(CLI::IsMember({224, 256}));

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Summarize a run directory");
  report->add_option("run-dir", run_dir, "Directory written by run --out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(scenario_path, seed, out);
    if (*sweep) return cmd_sweep(scenario_path, grid_path, workers, sweep_out);
    if (*bw) return cmd_verify_bandwidth(peers, width);
    if (*report) {
      std::cout << ct::summarize_run_directory(run_dir);
      return 0;
    }
  } catch (const ct::Error& e) {
    std::cerr << "error (" << ct::to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

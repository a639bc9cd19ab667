#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace mtt::cli;

  CLI::App app{"Multi-target tracking data-association toolkit"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  app.fallthrough();

  Verbosity verbosity;
  bool quiet = false;
  int verbose = 0;
  app.add_flag("-v,--verbose", verbose, "More output (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Only errors");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate truth.csv and scans.csv for one scenario");
  sim_cmd->add_option("config", sim.config, "Scenario JSON (default: five-target crossing scenario)");
  sim_cmd->add_option("--out", sim.out, "Output directory");
  sim_cmd->add_option("--seed", sim.seed, "Seed override");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train the association network; writes model.json, loss_curve.csv");
  train_cmd->add_option("config", tr.config, "Training JSON (default: built-in defaults)");
  train_cmd->add_option("--out", tr.out, "Output directory");

  TrackOptions tk;
  auto* track_cmd = app.add_subcommand("track", "Run one tracking episode; writes tracks.csv, metrics.json");
  track_cmd->add_option("config", tk.config, "Scenario JSON used for simulation and JPDA clutter density");
  track_cmd->add_option("--scans", tk.scans, "Track measurements from scans.csv instead of simulating");
  track_cmd->add_option("--truth", tk.truth, "truth.csv matching --scans");
  track_cmd->add_option("--method", tk.method, "ha, jpda or deepda")->capture_default_str();
  track_cmd->add_option("--model", tk.model, "Trained model (deepda)");
  track_cmd->add_option("--out", tk.out, "Output directory");
  track_cmd->add_option("--seed", tk.seed, "Seed override");
  track_cmd->add_option("--ospa-c", tk.ospa_c, "OSPA cutoff")->capture_default_str();
  track_cmd->add_option("--ospa-p", tk.ospa_p, "OSPA order")->capture_default_str();

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo comparison grid; writes report.csv and plot data");
  bench_cmd->add_option("config", bo.config, "Bench JSON (default: clutter sweep at p_d 0.9)");
  bench_cmd->add_option("--out", bo.out, "Output directory");
  bench_cmd->add_option("--jobs", bo.jobs, "Parallel episodes")->capture_default_str();
  bench_cmd->add_option("--raw-log", bo.raw_log, "Per-episode CSV log");
  bench_cmd->add_option("--model", bo.model, "Trained model (overrides model_path)");
  bench_cmd->add_option("--seed", bo.seed, "Seed override");

  InspectOptions io;
  auto* inspect_cmd = app.add_subcommand("inspect-model", "Print a model's configuration and parameter summary");
  inspect_cmd->add_option("model", io.model, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  verbosity.level = quiet ? 0 : 1 + verbose;

  if (*sim_cmd) return run_guarded([&] { return simulate(sim, verbosity); });
  if (*train_cmd) return run_guarded([&] { return train(tr, verbosity); });
  if (*track_cmd) return run_guarded([&] { return track(tk, verbosity); });
  if (*bench_cmd) return run_guarded([&] { return bench(bo, verbosity); });
  return run_guarded([&] { return inspect_model(io, verbosity); });
}

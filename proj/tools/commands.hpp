#pragma once

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "mtt/error.hpp"

namespace mtt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// 0 quiet, 1 normal, 2 verbose.
struct Verbosity {
  int level = 1;
};

struct SimulateOptions {
  std::optional<std::string> config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

struct TrainOptions {
  std::optional<std::string> config;
  std::string out = ".";
};

struct TrackOptions {
  std::optional<std::string> config;
  std::optional<std::string> scans;
  std::optional<std::string> truth;
  std::string method = "ha";
  std::optional<std::string> model;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  double ospa_c = 10.0;
  double ospa_p = 2.0;
};

struct BenchOptions {
  std::optional<std::string> config;
  std::string out = ".";
  int jobs = 1;
  std::optional<std::string> raw_log;
  std::optional<std::string> model;
  std::optional<std::uint64_t> seed;
};

struct InspectOptions {
  std::string model;
};

// Each command returns a process exit code; library errors are mapped by run_guarded.
int simulate(const SimulateOptions& opt, Verbosity v);
int train(const TrainOptions& opt, Verbosity v);
int track(const TrackOptions& opt, Verbosity v);
int bench(const BenchOptions& opt, Verbosity v);
int inspect_model(const InspectOptions& opt, Verbosity v);

std::string version_text();

/// Runs `command`, printing errors to stderr and mapping them to exit codes:
/// numerical failures to 3, every other error to 2.
template <class F>
int run_guarded(F&& command) {
  try {
    return command();
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mtt::cli

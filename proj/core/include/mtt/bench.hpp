#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtt/domain.hpp"
#include "mtt/engines.hpp"
#include "mtt/metrics.hpp"
#include "mtt/scenario.hpp"

namespace mtt::bench {

/// Rule text written into every report so STTI numbers stay comparable.
inline constexpr const char* kSttiRule =
    "per target, the claimed track is the track whose assigned measurement carries the target's label; "
    "each change of claimed track between consecutive scans where it is defined counts one switch; "
    "probabilistic engines are hardened by the max-probability one-to-one assignment";

/// Per-scan outputs of one tracked episode.
struct EpisodeTrace {
  std::vector<std::vector<Track>> tracks;   // after the update at each scan
  std::vector<Assignment> assignments;      // hard (or hardened) association per scan
  std::vector<double> ospa;                 // per scan
  std::vector<double> assoc_seconds;        // per scan, association call only
};

struct EpisodeResult {
  double ospa_mean = 0.0;
  int stti = 0;
  double time_mean_s = 0.0;
  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

/// Tracks `scans` starting from tracks at `initial_states` (time of scan 0).
/// Scan 0 is associated without a prediction; every later scan is predicted
/// first. Engine errors are rethrown with the scan index.
EpisodeTrace track_scans(const std::vector<Vec4>& initial_states, const std::vector<Scan>& scans,
                         const std::vector<std::vector<Vec4>>& truth_states, const Engine& engine,
                         const TrackerSettings& settings, const metrics::OspaParams& ospa);

EpisodeResult summarize(const EpisodeTrace& trace, const std::vector<Scan>& scans);

/// Simulates truth and scans from `config` with `seed`, then tracks them.
EpisodeResult run_episode(const ScenarioConfig& config, const Engine& engine, std::uint64_t seed,
                          const TrackerSettings& settings, const metrics::OspaParams& ospa);
EpisodeResult run_episode(const ScenarioConfig& config, Method method, const deepda::LstmModel* model,
                          std::uint64_t seed, const TrackerSettings& settings, const metrics::OspaParams& ospa);

struct BenchSpec {
  ScenarioConfig base = ScenarioConfig::five_target_crossing();
  std::vector<double> pd_values{0.9};
  std::vector<double> elambda_values{5.0, 10.0, 20.0, 30.0, 40.0};
  int n_runs = 100;
  std::vector<Method> methods{Method::HA, Method::JPDA, Method::DeepDA};
  std::optional<std::string> model_path;
  metrics::OspaParams ospa{};
  std::uint64_t seed = 0;
  TrackerSettings tracker{};
  /// When false, association time is not measured and reported as 0.
  bool timing = true;

  void validate() const;
};

/// Strict JSON: keys base, pd_values, elambda_values, n_runs, methods,
/// model_path, ospa {c, p}, seed, timing; all but base optional.
BenchSpec bench_spec_from_json(std::string_view text);
std::string to_json(const BenchSpec& spec);

struct BenchRow {
  Method method = Method::HA;
  double p_d = 0.0;
  double e_lambda = 0.0;
  double ospa_mean = 0.0;
  double ospa_std = 0.0;
  double stti_mean = 0.0;
  double stti_std = 0.0;
  double time_mean_s = 0.0;
  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct EpisodeRecord {
  Method method = Method::HA;
  double p_d = 0.0;
  double e_lambda = 0.0;
  int run = 0;
  double ospa = 0.0;
  double stti = 0.0;
  double time_s = 0.0;
  std::string error;  // empty on success
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<EpisodeRecord> episodes;
  std::vector<std::string> failures;
};

/// Seed of run `run` in grid cell (pd_index, el_index); shared by all methods.
std::uint64_t episode_seed(std::uint64_t seed, std::size_t pd_index, std::size_t el_index, int run);

/// Runs every (p_d, e_lambda, method) cell for n_runs episodes on `jobs`
/// threads. Rows are ordered p_d, then e_lambda, then method, and do not
/// depend on `jobs`. A failing episode marks its cell's metrics NaN.
BenchReport run_grid(const BenchSpec& spec, const deepda::LstmModel* model, int jobs = 1);
/// Loads spec.model_path when DeepDA is requested.
BenchReport run_grid(const BenchSpec& spec, int jobs = 1);

/// Mean/std aggregation of the per-episode records into rows.
std::vector<BenchRow> aggregate(const BenchSpec& spec, const std::vector<EpisodeRecord>& episodes);

inline constexpr const char* kReportColumns =
    "method,p_d,e_lambda,ospa_mean,ospa_std,stti_mean,stti_std,time_mean_s";

void write_report_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_report_csv(std::istream& in);
void write_raw_log_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes);
std::vector<EpisodeRecord> read_raw_log_csv(std::istream& in);
std::string report_to_json(const BenchReport& report, const BenchSpec& spec);
/// `method,p_d,e_lambda,ospa_mean,ospa_std`, sorted for OSPA-vs-E_lambda curves.
void write_ospa_vs_elambda_csv(std::ostream& out, const std::vector<BenchRow>& rows);
/// Same columns, sorted for OSPA-vs-P_d curves.
void write_ospa_vs_pd_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Writes report.csv, report.json, ospa_vs_elambda.csv and ospa_vs_pd.csv into `dir`.
void emit_report(const BenchReport& report, const BenchSpec& spec, const std::filesystem::path& dir);

/// Table-style summary, one line per row.
void print_summary(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace mtt::bench

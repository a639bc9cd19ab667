#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "csv_util.hpp"
#include "mtt/bench.hpp"
#include "mtt/deepda.hpp"
#include "mtt/scenario.hpp"
#include "mtt/trainer.hpp"
#include "mtt/training_set.hpp"
#include "train_spec.hpp"

namespace mtt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("output directory '" + dir + "' is not writable");
  return fs::path(dir);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void print_effective(const char* what, const std::string& json_text, Verbosity v) {
  if (v.level >= 1) std::cerr << "effective " << what << " config:\n" << json_text << '\n';
}

bench::TrackerSettings tracker_notes(Verbosity v) {
  const bench::TrackerSettings s;
  if (v.level >= 1) {
    std::cerr << "tracker: q=" << s.filter.q << " R=diag(" << s.filter.r_diag[0] << ", " << s.filter.r_diag[1]
              << ") P0=diag(" << s.initial_covariance(0, 0) << ", " << s.initial_covariance(1, 1) << ", "
              << s.initial_covariance(2, 2) << ", " << s.initial_covariance(3, 3) << ") gate=" << s.gate.gamma
              << '\n';
  }
  return s;
}

ScenarioConfig load_scenario(const std::optional<std::string>& path) {
  if (!path) return ScenarioConfig::five_target_crossing();
  return scenario_config_from_json(read_text(*path));
}

}  // namespace

std::string version_text() {
  return std::string("mtt ") + MTT_VERSION_STRING + " (model format " +
         std::to_string(deepda::kModelFormatVersion) + ")";
}

int simulate(const SimulateOptions& opt, Verbosity v) {
  ScenarioConfig config = load_scenario(opt.config);
  if (opt.seed) config.seed = *opt.seed;
  print_effective("scenario", to_json(config), v);
  const fs::path out = prepare_out(opt.out);

  const scenario::GroundTruth truth = scenario::generate_truth(config);
  const std::vector<Scan> scans = scenario::generate_scans(truth, config.seed);
  {
    auto f = open_output(out / "truth.csv");
    scenario::write_truth_csv(f, truth);
  }
  {
    auto f = open_output(out / "scans.csv");
    scenario::write_scans_csv(f, scans);
  }

  std::size_t detections = 0, clutter = 0;
  for (const Scan& s : scans)
    for (const Origin& o : *s.origins) (o.is_clutter() ? clutter : detections)++;
  if (v.level >= 1) {
    std::cout << "targets " << config.num_targets << ", scans " << scans.size() << ", detections " << detections
              << ", mean clutter per scan " << static_cast<double>(clutter) / static_cast<double>(scans.size())
              << '\n';
  }
  return kExitOk;
}

int train(const TrainOptions& opt, Verbosity v) {
  const TrainSpec spec = opt.config ? train_spec_from_json(read_text(*opt.config)) : TrainSpec{};
  spec.validate();
  print_effective("train", to_json(spec), v);
  const fs::path out = prepare_out(opt.out);

  const auto variants = scenario::seeded_variants(spec.scenario, spec.num_variants, spec.variant_seed);
  const deepda::TrainingSet data = scenario::make_training_set(variants, spec.training_set_options());
  if (v.level >= 1) std::cerr << "training samples: " << data.size() << '\n';

  const auto progress = [&](int epoch, double loss) {
    if (v.level >= 2) std::cerr << "epoch " << epoch << " loss " << loss << '\n';
  };
  const deepda::TrainResult result = deepda::train(data, spec.net, spec.train, progress);

  deepda::save_model(result.model, out / "model.json");
  {
    auto f = open_output(out / "loss_curve.csv");
    deepda::write_loss_curve_csv(f, result.loss_curve);
  }
  const double first = result.loss_curve.front();
  const double last = result.loss_curve.back();
  if (v.level >= 1)
    std::cout << "final loss " << csv::format_double(last) << " (final/initial " << csv::format_double(last / first)
              << ")\n";
  return kExitOk;
}

int track(const TrackOptions& opt, Verbosity v) {
  const bench::Method method = bench::method_from_string(opt.method);
  if (method == bench::Method::DeepDA && !opt.model) throw ConfigError("model", "deepda requires --model");
  if (opt.scans.has_value() != opt.truth.has_value())
    throw ConfigError("scans", "--scans and --truth must be given together");

  ScenarioConfig config = load_scenario(opt.config);
  if (opt.seed) config.seed = *opt.seed;
  metrics::OspaParams ospa{opt.ospa_c, opt.ospa_p};
  ospa.validate();
  print_effective("scenario", to_json(config), v);
  const bench::TrackerSettings settings = tracker_notes(v);
  const fs::path out = prepare_out(opt.out);

  std::vector<std::vector<Vec4>> truth;
  std::vector<Scan> scans;
  if (opt.scans) {
    auto tin = open_input(*opt.truth);
    truth = scenario::read_truth_csv(tin);
    if (truth.empty()) throw FormatError("truth file has no rows");
    auto sin = open_input(*opt.scans);
    scans = scenario::read_scans_csv(sin, static_cast<int>(truth.size()));
  } else {
    const scenario::GroundTruth gt = scenario::generate_truth(config);
    truth = gt.states;
    scans = scenario::generate_scans(gt, config.seed);
  }

  std::optional<deepda::LstmModel> model;
  if (opt.model) model = deepda::load_model(*opt.model);
  const auto engine = bench::make_engine(method, config, settings, model ? &*model : nullptr);
  const bench::EpisodeTrace trace = bench::track_scans(truth.front(), scans, truth, *engine, settings, ospa);
  const bench::EpisodeResult result = bench::summarize(trace, scans);

  {
    auto f = open_output(out / "tracks.csv");
    f << "k,track,x,vx,y,vy\n";
    for (std::size_t k = 0; k < trace.tracks.size(); ++k)
      for (const Track& t : trace.tracks[k])
        f << scans[k].k << ',' << t.id.value << ',' << csv::format_double(t.state[0]) << ','
          << csv::format_double(t.state[1]) << ',' << csv::format_double(t.state[2]) << ','
          << csv::format_double(t.state[3]) << '\n';
  }
  json metrics = {{"method", std::string(bench::to_string(method))},
                  {"ospa_mean", result.ospa_mean},
                  {"ospa_c", ospa.c},
                  {"ospa_p", ospa.p},
                  {"stti", result.stti},
                  {"time_mean_s", result.time_mean_s},
                  {"scans", scans.size()},
                  {"stti_rule", bench::kSttiRule}};
  {
    auto f = open_output(out / "metrics.json");
    f << metrics.dump(2) << '\n';
  }
  if (v.level >= 1)
    std::cout << bench::to_string(method) << ": ospa_mean " << csv::format_double(result.ospa_mean) << ", stti "
              << result.stti << ", time_mean_s " << csv::format_double(result.time_mean_s) << '\n';
  return kExitOk;
}

int bench(const BenchOptions& opt, Verbosity v) {
  bench::BenchSpec spec = opt.config ? bench::bench_spec_from_json(read_text(*opt.config)) : bench::BenchSpec{};
  if (opt.model) spec.model_path = *opt.model;
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.jobs < 1) throw ConfigError("jobs", "must be at least 1");
  spec.validate();
  bool needs_model = false;
  for (bench::Method m : spec.methods) needs_model = needs_model || m == bench::Method::DeepDA;
  if (needs_model && !spec.model_path) throw ConfigError("model_path", "DeepDA requires a trained model");
  print_effective("bench", bench::to_json(spec), v);
  tracker_notes(v);
  const fs::path out = prepare_out(opt.out);

  const bench::BenchReport report = bench::run_grid(spec, opt.jobs);
  bench::emit_report(report, spec, out);
  if (opt.raw_log) {
    auto f = open_output(*opt.raw_log);
    bench::write_raw_log_csv(f, report.episodes);
  }
  for (const std::string& f : report.failures) std::cerr << "episode failed: " << f << '\n';
  bench::print_summary(std::cout, report.rows);
  return kExitOk;
}

int inspect_model(const InspectOptions& opt, Verbosity) {
  const deepda::LstmModel m = deepda::load_model(opt.model);
  std::cout << "format version " << deepda::kModelFormatVersion << '\n'
            << "d " << m.config.d << ", m_max " << m.config.m_max << ", hidden " << m.config.hidden << ", seed "
            << m.config.seed << ", output " << deepda::to_string(m.config.output) << '\n'
            << "parameters " << m.params.size() << '\n';
  m.params.visit([](std::string_view name, const auto& t) {
    std::cout << "  " << name << ' ' << t.rows() << 'x' << t.cols() << " |max| " << t.cwiseAbs().maxCoeff() << '\n';
  });
  std::cout << "norm min " << m.norm.min.minCoeff() << ".." << m.norm.min.maxCoeff() << ", max "
            << m.norm.max.minCoeff() << ".." << m.norm.max.maxCoeff() << '\n';
  return kExitOk;
}

}  // namespace mtt::cli

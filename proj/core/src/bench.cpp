#include "mtt/bench.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "json_fields.hpp"
#include "mtt/deepda.hpp"
#include "mtt/error.hpp"
#include "mtt/kalman.hpp"
#include "mtt/rng.hpp"

namespace mtt::bench {

namespace {

std::vector<Vec2> positions(const std::vector<Track>& tracks) {
  std::vector<Vec2> out;
  out.reserve(tracks.size());
  for (const Track& t : tracks) out.push_back(kalman::predicted_measurement(t));
  return out;
}

std::vector<Vec2> positions(const std::vector<Vec4>& states) {
  std::vector<Vec2> out;
  out.reserve(states.size());
  for (const Vec4& s : states) out.emplace_back(s[0], s[2]);
  return out;
}

}  // namespace

EpisodeTrace track_scans(const std::vector<Vec4>& initial_states, const std::vector<Scan>& scans,
                         const std::vector<std::vector<Vec4>>& truth_states, const Engine& engine,
                         const TrackerSettings& settings, const metrics::OspaParams& ospa) {
  if (!truth_states.empty() && truth_states.size() != scans.size())
    throw ContractViolation("track_scans: truth and scans differ in length");
  std::vector<Track> tracks;
  tracks.reserve(initial_states.size());
  for (std::size_t j = 0; j < initial_states.size(); ++j)
    tracks.push_back(Track{TargetId{static_cast<int>(j)}, initial_states[j], settings.initial_covariance});

  EpisodeTrace trace;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    const Scan& scan = scans[k];
    if (k > 0)
      for (Track& t : tracks) t = kalman::predict(t, settings.filter);

    auto [out, seconds] = metrics::timed([&] { return engine.associate(tracks, scan); });

    Assignment hard;
    if (out.hard) {
      hard = *out.hard;
      for (std::size_t j = 0; j < tracks.size(); ++j)
        if (auto m = hard.measurement_of(j)) tracks[j] = kalman::update_hard(tracks[j], scan.measurements[*m], settings.filter);
    } else if (out.probs) {
      out.probs->validate(1e-6);
      for (std::size_t j = 0; j < tracks.size(); ++j)
        tracks[j] = kalman::update_weighted(tracks[j], scan, out.probs->rows.row(static_cast<Eigen::Index>(j)),
                                            settings.filter);
      hard = hard_assignment_from_probs(*out.probs);
    } else {
      throw ContractViolation("engine returned no association");
    }

    trace.assignments.push_back(std::move(hard));
    trace.assoc_seconds.push_back(seconds);
    if (!truth_states.empty()) {
      const auto truth = positions(truth_states[k]);
      const auto est = positions(tracks);
      trace.ospa.push_back(metrics::ospa(truth, est, ospa));
    }
    trace.tracks.push_back(tracks);
  }
  return trace;
}

EpisodeResult summarize(const EpisodeTrace& trace, const std::vector<Scan>& scans) {
  EpisodeResult r;
  r.ospa_mean = trace.ospa.empty() ? 0.0 : metrics::mean(trace.ospa);
  r.stti = metrics::stti(trace.assignments, scans);
  r.time_mean_s = trace.assoc_seconds.empty() ? 0.0 : metrics::mean(trace.assoc_seconds);
  return r;
}

EpisodeResult run_episode(const ScenarioConfig& config, const Engine& engine, std::uint64_t seed,
                          const TrackerSettings& settings, const metrics::OspaParams& ospa) {
  const scenario::GroundTruth truth = scenario::generate_truth(config);
  const std::vector<Scan> scans = scenario::generate_scans(truth, seed);
  const EpisodeTrace trace = track_scans(truth.states.front(), scans, truth.states, engine, settings, ospa);
  return summarize(trace, scans);
}

EpisodeResult run_episode(const ScenarioConfig& config, Method method, const deepda::LstmModel* model,
                          std::uint64_t seed, const TrackerSettings& settings, const metrics::OspaParams& ospa) {
  const auto engine = make_engine(method, config, settings, model);
  return run_episode(config, *engine, seed, settings, ospa);
}

void BenchSpec::validate() const {
  base.validate();
  if (pd_values.empty()) throw ConfigError("pd_values", "must not be empty");
  for (double p : pd_values)
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("pd_values", "entries must lie in (0, 1]");
  if (elambda_values.empty()) throw ConfigError("elambda_values", "must not be empty");
  for (double e : elambda_values)
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("elambda_values", "entries must be finite and >= 0");
  if (n_runs < 1) throw ConfigError("n_runs", "must be at least 1");
  if (methods.empty()) throw ConfigError("methods", "must not be empty");
  ospa.validate();
}

BenchSpec bench_spec_from_json(std::string_view text) {
  using detail::json;
  const json doc = detail::parse_document(text);
  if (!doc.is_object()) throw ConfigError("", "bench spec must be a JSON object");
  detail::reject_unknown(doc, {"base", "pd_values", "elambda_values", "n_runs", "methods", "model_path", "ospa", "seed",
                               "timing"},
                         "");
  BenchSpec spec;
  if (doc.contains("base")) spec.base = detail::scenario_from_json(detail::read_object(doc, "base", ""), "base");
  auto numbers = [&](const char* key) {
    std::vector<double> out;
    for (const json& v : detail::read_array(doc, key, "")) {
      if (!v.is_number()) throw ConfigError(key, "entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (doc.contains("pd_values")) spec.pd_values = numbers("pd_values");
  if (doc.contains("elambda_values")) spec.elambda_values = numbers("elambda_values");
  if (doc.contains("n_runs")) spec.n_runs = static_cast<int>(detail::read_integer(doc, "n_runs", ""));
  if (doc.contains("methods")) {
    spec.methods.clear();
    for (const json& v : detail::read_array(doc, "methods", "")) {
      if (!v.is_string()) throw ConfigError("methods", "entries must be strings");
      spec.methods.push_back(method_from_string(v.get<std::string>()));
    }
  }
  if (doc.contains("model_path")) spec.model_path = detail::read_string(doc, "model_path", "");
  if (doc.contains("ospa")) {
    const json& o = detail::read_object(doc, "ospa", "");
    detail::reject_unknown(o, {"c", "p"}, "ospa");
    if (o.contains("c")) spec.ospa.c = detail::read_number(o, "c", "ospa");
    if (o.contains("p")) spec.ospa.p = detail::read_number(o, "p", "ospa");
  }
  if (doc.contains("seed")) {
    const long long s = detail::read_integer(doc, "seed", "");
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    spec.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("timing")) spec.timing = detail::read_bool(doc, "timing", "");
  spec.validate();
  return spec;
}

std::string to_json(const BenchSpec& spec) {
  detail::json doc;
  doc["base"] = detail::scenario_to_json(spec.base);
  doc["pd_values"] = spec.pd_values;
  doc["elambda_values"] = spec.elambda_values;
  doc["n_runs"] = spec.n_runs;
  doc["methods"] = detail::json::array();
  for (Method m : spec.methods) doc["methods"].push_back(std::string(to_string(m)));
  if (spec.model_path) doc["model_path"] = *spec.model_path;
  doc["ospa"] = {{"c", spec.ospa.c}, {"p", spec.ospa.p}};
  doc["seed"] = spec.seed;
  doc["timing"] = spec.timing;
  return doc.dump(2);
}

std::uint64_t episode_seed(std::uint64_t seed, std::size_t pd_index, std::size_t el_index, int run) {
  return derive_seed(seed, {pd_index, el_index, static_cast<std::uint64_t>(run)});
}

std::vector<BenchRow> aggregate(const BenchSpec& spec, const std::vector<EpisodeRecord>& episodes) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<BenchRow> rows;
  for (double p_d : spec.pd_values)
    for (double e_lambda : spec.elambda_values)
      for (Method m : spec.methods) {
        std::vector<double> o, s, t;
        bool failed = false;
        for (const EpisodeRecord& r : episodes) {
          if (r.method != m || r.p_d != p_d || r.e_lambda != e_lambda) continue;
          if (!r.error.empty()) {
            failed = true;
            continue;
          }
          o.push_back(r.ospa);
          s.push_back(r.stti);
          t.push_back(r.time_s);
        }
        BenchRow row{m, p_d, e_lambda, nan, nan, nan, nan, nan};
        if (!failed && !o.empty()) {
          row.ospa_mean = metrics::mean(o);
          row.ospa_std = metrics::stddev(o);
          row.stti_mean = metrics::mean(s);
          row.stti_std = metrics::stddev(s);
          row.time_mean_s = metrics::mean(t);
        }
        rows.push_back(row);
      }
  return rows;
}

BenchReport run_grid(const BenchSpec& spec, const deepda::LstmModel* model, int jobs) {
  spec.validate();
  if (jobs < 1) throw ConfigError("jobs", "must be at least 1");
  for (Method m : spec.methods)
    if (m == Method::DeepDA && model == nullptr) throw ConfigError("model_path", "DeepDA requires a trained model");

  const std::size_t n_pd = spec.pd_values.size();
  const std::size_t n_el = spec.elambda_values.size();
  const std::size_t n_m = spec.methods.size();
  const std::size_t n_runs = static_cast<std::size_t>(spec.n_runs);
  const std::size_t n_tasks = n_pd * n_el * n_runs;

  std::vector<EpisodeRecord> records(n_tasks * n_m);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      // Run is the outer index, so drift in machine speed while timing is
      // spread over every cell rather than landing on the last ones.
      const std::size_t el = task % n_el;
      const std::size_t pd = (task / n_el) % n_pd;
      const std::size_t run = task / (n_el * n_pd);
      ScenarioConfig config = spec.base;
      config.p_d = spec.pd_values[pd];
      config.e_lambda = spec.elambda_values[el];
      const std::uint64_t seed = episode_seed(spec.seed, pd, el, static_cast<int>(run));
      config.seed = seed;
      for (std::size_t mi = 0; mi < n_m; ++mi) {
        EpisodeRecord& rec = records[((pd * n_el + el) * n_m + mi) * n_runs + run];
        rec.method = spec.methods[mi];
        rec.p_d = config.p_d;
        rec.e_lambda = config.e_lambda;
        rec.run = static_cast<int>(run);
        try {
          const EpisodeResult r = run_episode(config, rec.method, model, seed, spec.tracker, spec.ospa);
          rec.ospa = r.ospa_mean;
          rec.stti = r.stti;
          rec.time_s = spec.timing ? r.time_mean_s : 0.0;
        } catch (const std::exception& e) {
          rec.error = e.what();
          if (rec.error.empty()) rec.error = "unknown error";
        }
      }
    }
  };

  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), n_tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  BenchReport report;
  report.rows = aggregate(spec, records);
  for (const EpisodeRecord& r : records)
    if (!r.error.empty())
      report.failures.push_back(std::string(to_string(r.method)) + " p_d=" + std::to_string(r.p_d) +
                                " e_lambda=" + std::to_string(r.e_lambda) + " run=" + std::to_string(r.run) + ": " +
                                r.error);
  report.episodes = std::move(records);
  return report;
}

BenchReport run_grid(const BenchSpec& spec, int jobs) {
  bool needs_model = false;
  for (Method m : spec.methods) needs_model = needs_model || m == Method::DeepDA;
  if (!needs_model) return run_grid(spec, nullptr, jobs);
  if (!spec.model_path) throw ConfigError("model_path", "DeepDA requires a trained model");
  const deepda::LstmModel model = deepda::load_model(*spec.model_path);
  return run_grid(spec, &model, jobs);
}

}  // namespace mtt::bench

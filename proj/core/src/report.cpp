#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "csv_util.hpp"
#include "mtt/bench.hpp"
#include "mtt/error.hpp"

namespace mtt::bench {

namespace {

using csv::format_double;

std::string fmt(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

void write_curve(std::ostream& out, std::vector<BenchRow> rows, bool by_elambda) {
  std::stable_sort(rows.begin(), rows.end(), [&](const BenchRow& a, const BenchRow& b) {
    if (a.method != b.method) return a.method < b.method;
    if (by_elambda) {
      if (a.p_d != b.p_d) return a.p_d < b.p_d;
      return a.e_lambda < b.e_lambda;
    }
    if (a.e_lambda != b.e_lambda) return a.e_lambda < b.e_lambda;
    return a.p_d < b.p_d;
  });
  out << "method,p_d,e_lambda,ospa_mean,ospa_std\n";
  for (const BenchRow& r : rows)
    out << to_string(r.method) << ',' << fmt(r.p_d) << ',' << fmt(r.e_lambda) << ',' << fmt(r.ospa_mean) << ','
        << fmt(r.ospa_std) << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kReportColumns << '\n';
  for (const BenchRow& r : rows)
    out << to_string(r.method) << ',' << fmt(r.p_d) << ',' << fmt(r.e_lambda) << ',' << fmt(r.ospa_mean) << ','
        << fmt(r.ospa_std) << ',' << fmt(r.stti_mean) << ',' << fmt(r.stti_std) << ',' << fmt(r.time_mean_s) << '\n';
}

std::vector<BenchRow> read_report_csv(std::istream& in) {
  const csv::Table t = csv::read(
      in, {"method", "p_d", "e_lambda", "ospa_mean", "ospa_std", "stti_mean", "stti_std", "time_mean_s"});
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    BenchRow r;
    try {
      r.method = method_from_string(f[0]);
    } catch (const ConfigError&) {
      throw FormatError("csv row " + std::to_string(i + 2) + ": unknown method '" + f[0] + "'");
    }
    r.p_d = csv::parse_double(f[1], i);
    r.e_lambda = csv::parse_double(f[2], i);
    r.ospa_mean = csv::parse_double(f[3], i);
    r.ospa_std = csv::parse_double(f[4], i);
    r.stti_mean = csv::parse_double(f[5], i);
    r.stti_std = csv::parse_double(f[6], i);
    r.time_mean_s = csv::parse_double(f[7], i);
    rows.push_back(r);
  }
  return rows;
}

void write_raw_log_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes) {
  out << "method,p_d,e_lambda,run,ospa,stti,time_s\n";
  for (const EpisodeRecord& r : episodes) {
    const bool ok = r.error.empty();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << to_string(r.method) << ',' << fmt(r.p_d) << ',' << fmt(r.e_lambda) << ',' << r.run << ','
        << fmt(ok ? r.ospa : nan) << ',' << fmt(ok ? r.stti : nan) << ',' << fmt(ok ? r.time_s : nan) << '\n';
  }
}

std::vector<EpisodeRecord> read_raw_log_csv(std::istream& in) {
  const csv::Table t = csv::read(in, {"method", "p_d", "e_lambda", "run", "ospa", "stti", "time_s"});
  std::vector<EpisodeRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& f = t.rows[i];
    EpisodeRecord r;
    try {
      r.method = method_from_string(f[0]);
    } catch (const ConfigError&) {
      throw FormatError("csv row " + std::to_string(i + 2) + ": unknown method '" + f[0] + "'");
    }
    r.p_d = csv::parse_double(f[1], i);
    r.e_lambda = csv::parse_double(f[2], i);
    r.run = static_cast<int>(csv::parse_int(f[3], i));
    r.ospa = csv::parse_double(f[4], i);
    r.stti = csv::parse_double(f[5], i);
    r.time_s = csv::parse_double(f[6], i);
    if (std::isnan(r.ospa)) r.error = "failed";
    out.push_back(r);
  }
  return out;
}

std::string report_to_json(const BenchReport& report, const BenchSpec& spec) {
  using nlohmann::json;
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json doc;
  doc["spec"] = json::parse(to_json(spec));
  doc["rows"] = json::array();
  for (const BenchRow& r : report.rows)
    doc["rows"].push_back({{"method", std::string(to_string(r.method))},
                           {"p_d", r.p_d},
                           {"e_lambda", r.e_lambda},
                           {"ospa_mean", num(r.ospa_mean)},
                           {"ospa_std", num(r.ospa_std)},
                           {"stti_mean", num(r.stti_mean)},
                           {"stti_std", num(r.stti_std)},
                           {"time_mean_s", num(r.time_mean_s)}});
  doc["failures"] = report.failures;
  const auto& f = spec.tracker.filter;
  doc["notes"] = {
      {"stti_rule", kSttiRule},
      {"process_noise_q", f.q},
      {"measurement_noise_diag", {f.r_diag[0], f.r_diag[1]}},
      {"initial_covariance_diag",
       {spec.tracker.initial_covariance(0, 0), spec.tracker.initial_covariance(1, 1),
        spec.tracker.initial_covariance(2, 2), spec.tracker.initial_covariance(3, 3)}},
      {"gate_threshold", spec.tracker.gate.gamma},
      {"time_measured", spec.timing},
  };
  return doc.dump(2);
}

void write_ospa_vs_elambda_csv(std::ostream& out, const std::vector<BenchRow>& rows) { write_curve(out, rows, true); }
void write_ospa_vs_pd_csv(std::ostream& out, const std::vector<BenchRow>& rows) { write_curve(out, rows, false); }

void emit_report(const BenchReport& report, const BenchSpec& spec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream csv_out, el_out, pd_out;
  write_report_csv(csv_out, report.rows);
  write_ospa_vs_elambda_csv(el_out, report.rows);
  write_ospa_vs_pd_csv(pd_out, report.rows);
  write_file(dir / "report.csv", csv_out.str());
  write_file(dir / "report.json", report_to_json(report, spec) + "\n");
  write_file(dir / "ospa_vs_elambda.csv", el_out.str());
  write_file(dir / "ospa_vs_pd.csv", pd_out.str());
}

void print_summary(std::ostream& out, const std::vector<BenchRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-7s %5s %8s %10s %10s %10s %10s %12s\n", "method", "p_d", "e_lambda", "ospa",
                "ospa_sd", "stti", "stti_sd", "time_ms");
  out << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line, "%-7s %5.2f %8.1f %10.4f %10.4f %10.3f %10.3f %12.4f\n",
                  std::string(to_string(r.method)).c_str(), r.p_d, r.e_lambda, r.ospa_mean, r.ospa_std, r.stti_mean,
                  r.stti_std, r.time_mean_s * 1e3);
    out << line;
  }
}

}  // namespace mtt::bench

#include "mtt/scenario.hpp"

#include <istream>
#include <ostream>
#include <utility>

#include "csv_util.hpp"
#include "mtt/error.hpp"
#include "mtt/rng.hpp"

namespace mtt::scenario {

GroundTruth generate_truth(const ScenarioConfig& config) {
  config.validate();
  GroundTruth truth;
  truth.config = config;
  truth.states.resize(static_cast<std::size_t>(config.num_scans));
  truth.states[0] = config.initial_states;
  for (int k = 1; k < config.num_scans; ++k) {
    auto& row = truth.states[k];
    row.reserve(config.initial_states.size());
    for (const Vec4& prev : truth.states[k - 1])
      row.emplace_back(prev[0] + prev[1] * config.dt, prev[1], prev[2] + prev[3] * config.dt, prev[3]);
  }
  return truth;
}

Scan generate_scan(const GroundTruth& truth, std::uint64_t seed, int k) {
  const ScenarioConfig& c = truth.config;
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));

  std::vector<std::pair<Vec2, Origin>> items;
  for (int j = 0; j < truth.num_targets(); ++j) {
    if (!rng.bernoulli(c.p_d)) continue;
    const Vec2 p = truth.position(k, j);
    const double nx = rng.normal();
    const double ny = rng.normal();
    items.emplace_back(Vec2(p.x() + c.sigma_x * nx, p.y() + c.sigma_y * ny), Origin::target(TargetId{j}));
  }
  const std::uint64_t clutter = rng.poisson(c.e_lambda);
  for (std::uint64_t n = 0; n < clutter; ++n) {
    const double x = rng.uniform(c.region.x_min, c.region.x_max);
    const double y = rng.uniform(c.region.y_min, c.region.y_max);
    items.emplace_back(Vec2(x, y), Origin::clutter());
  }
  rng.shuffle(items);

  Scan scan;
  scan.k = k;
  scan.measurements.reserve(items.size());
  std::vector<Origin> origins;
  origins.reserve(items.size());
  for (auto& [z, o] : items) {
    scan.measurements.push_back(z);
    origins.push_back(o);
  }
  scan.origins = std::move(origins);
  return scan;
}

std::vector<Scan> generate_scans(const GroundTruth& truth, std::uint64_t seed) {
  std::vector<Scan> scans;
  scans.reserve(static_cast<std::size_t>(truth.num_scans()));
  for (int k = 0; k < truth.num_scans(); ++k) scans.push_back(generate_scan(truth, seed, k));
  return scans;
}

void write_scans_csv(std::ostream& out, const std::vector<Scan>& scans, int run) {
  out << "scan,k,x,y,origin\n";
  for (const Scan& s : scans) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int origin = s.origins ? (*s.origins)[i].code() : -1;
      out << run << ',' << s.k << ',' << csv::format_double(s.measurements[i].x()) << ','
          << csv::format_double(s.measurements[i].y()) << ',' << origin << '\n';
    }
  }
}

void write_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "scan,target,x,vx,y,vy\n";
  for (int k = 0; k < truth.num_scans(); ++k)
    for (int j = 0; j < truth.num_targets(); ++j) {
      const Vec4& s = truth.states[k][j];
      out << k << ',' << j << ',' << csv::format_double(s[0]) << ',' << csv::format_double(s[1]) << ','
          << csv::format_double(s[2]) << ',' << csv::format_double(s[3]) << '\n';
    }
}

std::vector<Scan> read_scans_csv(std::istream& in, int num_scans) {
  const csv::Table table = csv::read(in, {"scan", "k", "x", "y", "origin"});
  std::vector<Scan> scans(static_cast<std::size_t>(num_scans));
  for (int k = 0; k < num_scans; ++k) {
    scans[k].k = k;
    scans[k].origins.emplace();
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const long long k = csv::parse_int(row[1], r);
    if (k < 0 || k >= num_scans)
      throw FormatError("scans csv row " + std::to_string(r + 2) + ": scan index out of range");
    Scan& s = scans[static_cast<std::size_t>(k)];
    s.measurements.emplace_back(csv::parse_double(row[2], r), csv::parse_double(row[3], r));
    s.origins->push_back(Origin::from_code(static_cast<int>(csv::parse_int(row[4], r))));
  }
  for (const Scan& s : scans) s.validate();
  return scans;
}

std::vector<std::vector<Vec4>> read_truth_csv(std::istream& in) {
  const csv::Table table = csv::read(in, {"scan", "target", "x", "vx", "y", "vy"});
  std::vector<std::vector<Vec4>> states;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const long long k = csv::parse_int(row[0], r);
    const long long j = csv::parse_int(row[1], r);
    if (k < 0 || j < 0) throw FormatError("truth csv row " + std::to_string(r + 2) + ": negative index");
    if (static_cast<std::size_t>(k) >= states.size()) states.resize(static_cast<std::size_t>(k) + 1);
    auto& scan = states[static_cast<std::size_t>(k)];
    if (static_cast<std::size_t>(j) >= scan.size()) scan.resize(static_cast<std::size_t>(j) + 1, Vec4::Constant(std::nan("")));
    scan[static_cast<std::size_t>(j)] = Vec4(csv::parse_double(row[2], r), csv::parse_double(row[3], r),
                                             csv::parse_double(row[4], r), csv::parse_double(row[5], r));
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].size() != states.front().size())
      throw FormatError("truth csv: scan " + std::to_string(k) + " has a different target count");
    for (const Vec4& s : states[k])
      if (!s.allFinite()) throw FormatError("truth csv: missing state in scan " + std::to_string(k));
  }
  return states;
}

}  // namespace mtt::scenario

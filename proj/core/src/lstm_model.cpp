#include "mtt/lstm_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtt/error.hpp"
#include "mtt/rng.hpp"

namespace mtt::deepda {

using nlohmann::json;

std::string_view to_string(OutputActivation a) {
  return a == OutputActivation::Sigmoid ? "sigmoid" : "softmax";
}

OutputActivation output_activation_from_string(std::string_view s) {
  if (s == "sigmoid") return OutputActivation::Sigmoid;
  if (s == "softmax") return OutputActivation::Softmax;
  throw ConfigError("output", "expected 'sigmoid' or 'softmax'");
}

void NetConfig::validate() const {
  if (d < 1) throw ConfigError("d", "must be at least 1");
  if (m_max < 1) throw ConfigError("m_max", "must be at least 1");
  if (hidden < 1) throw ConfigError("hidden", "must be at least 1");
}

NormStats NormStats::identity(int features) {
  return {Eigen::VectorXd::Zero(features), Eigen::VectorXd::Ones(features)};
}

void NormStats::validate(int features) const {
  if (min.size() != features || max.size() != features)
    throw ContractViolation("norm stats size does not match the input size");
  if (!min.allFinite() || !max.allFinite()) throw ContractViolation("norm stats must be finite");
  if ((max.array() < min.array()).any()) throw ContractViolation("norm stats need max >= min");
}

LstmParams LstmParams::zeros(const NetConfig& cfg) {
  const int h = cfg.hidden;
  LstmParams p;
  p.w_in = Eigen::MatrixXd::Zero(h, cfg.input_size());
  p.b_in = Eigen::VectorXd::Zero(h);
  p.w_x = Eigen::MatrixXd::Zero(4 * h, h);
  p.w_h = Eigen::MatrixXd::Zero(4 * h, h);
  p.b_gates = Eigen::VectorXd::Zero(4 * h);
  p.w_out = Eigen::MatrixXd::Zero(cfg.output_size(), h);
  p.b_out = Eigen::VectorXd::Zero(cfg.output_size());
  return p;
}

Eigen::Index LstmParams::size() const {
  Eigen::Index n = 0;
  visit([&](std::string_view, const auto& t) { n += t.size(); });
  return n;
}

bool LstmParams::all_finite() const {
  bool ok = true;
  visit([&](std::string_view, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

bool LstmParams::same_shape(const LstmParams& o) const {
  return w_in.rows() == o.w_in.rows() && w_in.cols() == o.w_in.cols() && b_in.size() == o.b_in.size() &&
         w_x.rows() == o.w_x.rows() && w_x.cols() == o.w_x.cols() && w_h.rows() == o.w_h.rows() &&
         w_h.cols() == o.w_h.cols() && b_gates.size() == o.b_gates.size() && w_out.rows() == o.w_out.rows() &&
         w_out.cols() == o.w_out.cols() && b_out.size() == o.b_out.size();
}

bool LstmParams::operator==(const LstmParams& o) const {
  return same_shape(o) && w_in == o.w_in && b_in == o.b_in && w_x == o.w_x && w_h == o.w_h &&
         b_gates == o.b_gates && w_out == o.w_out && b_out == o.b_out;
}

LstmModel LstmModel::initialize(const NetConfig& config, NormStats norm) {
  config.validate();
  norm.validate(config.input_size());
  LstmModel m{config, std::move(norm), LstmParams::zeros(config)};
  Rng rng(derive_seed(config.seed, {0x1A57}));
  const double a = 1.0 / std::sqrt(static_cast<double>(config.hidden));
  m.params.visit([&](std::string_view, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-a, a);
  });
  return m;
}

void LstmModel::validate() const {
  config.validate();
  norm.validate(config.input_size());
  if (!params.same_shape(LstmParams::zeros(config)))
    throw ContractViolation("model parameter shapes do not match its NetConfig");
  if (!params.all_finite()) throw NumericalError("model parameters are not finite");
}

namespace {

template <class T>
json flat_row_major(const T& t) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c) arr.push_back(t(r, c));
  return arr;
}

template <class T>
void fill_row_major(T& t, const json& arr, std::string_view name) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != t.size())
    throw FormatError("model file: parameter '" + std::string(name) + "' has the wrong length");
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      const json& v = arr[k++];
      if (!v.is_number()) throw FormatError("model file: parameter '" + std::string(name) + "' is not numeric");
      t(r, c) = v.get<double>();
    }
}

Eigen::VectorXd read_vector(const json& arr, Eigen::Index n, std::string_view name) {
  Eigen::VectorXd v(n);
  fill_row_major(v, arr, name);
  return v;
}

}  // namespace

std::string model_to_json(const LstmModel& model) {
  json params = json::object();
  model.params.visit([&](std::string_view name, const auto& t) { params[std::string(name)] = flat_row_major(t); });
  json doc = {
      {"version", kModelFormatVersion},
      {"net_config",
       {{"d", model.config.d},
        {"m_max", model.config.m_max},
        {"hidden", model.config.hidden},
        {"seed", model.config.seed},
        {"output", std::string(to_string(model.config.output))}}},
      {"norm_stats", {{"min", flat_row_major(model.norm.min)}, {"max", flat_row_major(model.norm.max)}}},
      {"parameters", params},
  };
  return doc.dump();
}

void save_model(const LstmModel& model, const std::filesystem::path& path) {
  const std::string text = model_to_json(model);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text << '\n';
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

LstmModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model file is corrupt: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("version")) throw FormatError("model file has no version field");
    if (doc.at("version").get<int>() != kModelFormatVersion)
      throw FormatError("model file version " + doc.at("version").dump() + " is not supported (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    const json& nc = doc.at("net_config");
    LstmModel m;
    m.config.d = nc.at("d").get<int>();
    m.config.m_max = nc.at("m_max").get<int>();
    m.config.hidden = nc.at("hidden").get<int>();
    m.config.seed = nc.at("seed").get<std::uint64_t>();
    m.config.output = output_activation_from_string(nc.at("output").get<std::string>());
    m.config.validate();
    const Eigen::Index features = m.config.input_size();
    m.norm.min = read_vector(doc.at("norm_stats").at("min"), features, "norm_stats.min");
    m.norm.max = read_vector(doc.at("norm_stats").at("max"), features, "norm_stats.max");
    m.params = LstmParams::zeros(m.config);
    const json& params = doc.at("parameters");
    m.params.visit([&](std::string_view name, auto& t) { fill_row_major(t, params.at(std::string(name)), name); });
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file is malformed: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file has an invalid net_config: ") + e.what());
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("model file is inconsistent: ") + e.what());
  }
}

LstmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

LstmModel load_model(const std::filesystem::path& path, const NetConfig& expected) {
  LstmModel m = load_model(path);
  if (m.config.d != expected.d || m.config.m_max != expected.m_max || m.config.hidden != expected.hidden ||
      m.config.output != expected.output)
    throw FormatError("model file net_config (d=" + std::to_string(m.config.d) +
                      ", m_max=" + std::to_string(m.config.m_max) + ", hidden=" + std::to_string(m.config.hidden) +
                      ") does not match the expected configuration");
  return m;
}

}  // namespace mtt::deepda

#include "train_spec.hpp"

#include "json_fields.hpp"
#include "mtt/error.hpp"

namespace mtt::cli {

using detail::json;

namespace {

template <class F>
void under(const char* prefix, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(prefix) + "." + e.field(), e.message());
  }
}

}  // namespace

void TrainSpec::validate() const {
  under("scenario", [&] { scenario.validate(); });
  if (num_variants < 1) throw ConfigError("num_variants", "must be at least 1");
  under("net", [&] { net.validate(); });
  under("train", [&] { train.validate(); });
  under("gate", [&] { gate.validate(); });
}

scenario::TrainingSetOptions TrainSpec::training_set_options() const {
  scenario::TrainingSetOptions opt;
  opt.m_max = net.m_max;
  opt.gate = gate;
  return opt;
}

namespace {

std::uint64_t read_seed(const json& obj, std::string_view key, std::string_view prefix) {
  const long long v = detail::read_integer(obj, key, prefix);
  if (v < 0) throw ConfigError(detail::join_path(prefix, key), "must be non-negative");
  return static_cast<std::uint64_t>(v);
}

int read_int(const json& obj, std::string_view key, std::string_view prefix) {
  return static_cast<int>(detail::read_integer(obj, key, prefix));
}

}  // namespace

TrainSpec train_spec_from_json(std::string_view text) {
  const json doc = detail::parse_document(text);
  if (!doc.is_object()) throw ConfigError("", "train config must be a JSON object");
  detail::reject_unknown(doc, {"scenario", "num_variants", "variant_seed", "net", "train", "gate"}, "");
  TrainSpec spec;
  if (doc.contains("scenario"))
    spec.scenario = detail::scenario_from_json(detail::read_object(doc, "scenario", ""), "scenario");
  if (doc.contains("num_variants")) spec.num_variants = read_int(doc, "num_variants", "");
  if (doc.contains("variant_seed")) spec.variant_seed = read_seed(doc, "variant_seed", "");
  if (doc.contains("net")) {
    const json& n = detail::read_object(doc, "net", "");
    detail::reject_unknown(n, {"hidden", "m_max", "seed", "output"}, "net");
    if (n.contains("hidden")) spec.net.hidden = read_int(n, "hidden", "net");
    if (n.contains("m_max")) spec.net.m_max = read_int(n, "m_max", "net");
    if (n.contains("seed")) spec.net.seed = read_seed(n, "seed", "net");
    if (n.contains("output")) {
      const std::string name = detail::read_string(n, "output", "net");
      under("net", [&] { spec.net.output = deepda::output_activation_from_string(name); });
    }
  }
  if (doc.contains("train")) {
    const json& t = detail::read_object(doc, "train", "");
    detail::reject_unknown(t, {"lr", "rho", "eps", "batch", "epochs", "seed", "clip"}, "train");
    if (t.contains("lr")) spec.train.lr = detail::read_number(t, "lr", "train");
    if (t.contains("rho")) spec.train.rho = detail::read_number(t, "rho", "train");
    if (t.contains("eps")) spec.train.eps = detail::read_number(t, "eps", "train");
    if (t.contains("batch")) spec.train.batch = read_int(t, "batch", "train");
    if (t.contains("epochs")) spec.train.epochs = read_int(t, "epochs", "train");
    if (t.contains("seed")) spec.train.seed = read_seed(t, "seed", "train");
    if (t.contains("clip")) spec.train.clip = detail::read_number(t, "clip", "train");
  }
  if (doc.contains("gate")) {
    const json& g = detail::read_object(doc, "gate", "");
    detail::reject_unknown(g, {"gamma"}, "gate");
    if (g.contains("gamma")) spec.gate.gamma = detail::read_number(g, "gamma", "gate");
  }
  spec.validate();
  return spec;
}

std::string to_json(const TrainSpec& spec) {
  json doc;
  doc["scenario"] = detail::scenario_to_json(spec.scenario);
  doc["num_variants"] = spec.num_variants;
  doc["variant_seed"] = spec.variant_seed;
  doc["net"] = {{"hidden", spec.net.hidden},
                {"m_max", spec.net.m_max},
                {"seed", spec.net.seed},
                {"output", std::string(deepda::to_string(spec.net.output))}};
  doc["train"] = {{"lr", spec.train.lr},         {"rho", spec.train.rho},       {"eps", spec.train.eps},
                  {"batch", spec.train.batch},   {"epochs", spec.train.epochs}, {"seed", spec.train.seed},
                  {"clip", spec.train.clip}};
  doc["gate"] = {{"gamma", spec.gate.gamma}};
  return doc.dump(2);
}

}  // namespace mtt::cli

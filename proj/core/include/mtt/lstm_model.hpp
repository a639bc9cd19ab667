#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace mtt::deepda {

inline constexpr int kModelFormatVersion = 1;

enum class OutputActivation { Sigmoid, Softmax };

std::string_view to_string(OutputActivation a);
OutputActivation output_activation_from_string(std::string_view s);

struct NetConfig {
  int d = 2;          // measurement dimension
  int m_max = 32;     // measurement slots
  int hidden = 64;
  std::uint64_t seed = 0;
  OutputActivation output = OutputActivation::Sigmoid;

  void validate() const;
  int input_size() const noexcept { return d * m_max; }
  int output_size() const noexcept { return m_max + 1; }
  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

/// Per-feature min-max statistics over the d * m_max input features.
struct NormStats {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  /// min = 0, max = 1: leaves raw features untouched.
  static NormStats identity(int features);
  void validate(int features) const;
  bool operator==(const NormStats& o) const { return min == o.min && max == o.max; }
};

/// Learnable parameters. Gate blocks in w_x, w_h and b_gates are stacked
/// (input, forget, cell, output), each `hidden` rows tall.
struct LstmParams {
  Eigen::MatrixXd w_in;     // hidden x input_size
  Eigen::VectorXd b_in;     // hidden
  Eigen::MatrixXd w_x;      // 4*hidden x hidden
  Eigen::MatrixXd w_h;      // 4*hidden x hidden
  Eigen::VectorXd b_gates;  // 4*hidden
  Eigen::MatrixXd w_out;    // output_size x hidden
  Eigen::VectorXd b_out;    // output_size

  static LstmParams zeros(const NetConfig& cfg);

  /// Calls f(name, tensor) for every parameter tensor in a fixed order.
  template <class F>
  void visit(F&& f) {
    f(std::string_view("w_in"), w_in);
    f(std::string_view("b_in"), b_in);
    f(std::string_view("w_x"), w_x);
    f(std::string_view("w_h"), w_h);
    f(std::string_view("b_gates"), b_gates);
    f(std::string_view("w_out"), w_out);
    f(std::string_view("b_out"), b_out);
  }
  template <class F>
  void visit(F&& f) const {
    const_cast<LstmParams*>(this)->visit([&](std::string_view name, const auto& t) { f(name, t); });
  }

  Eigen::Index size() const;
  bool all_finite() const;
  bool same_shape(const LstmParams& o) const;
  bool operator==(const LstmParams& o) const;
};

struct LstmModel {
  NetConfig config;
  NormStats norm;
  LstmParams params;

  /// Parameters drawn from uniform(-1/sqrt(hidden), 1/sqrt(hidden)) with config.seed.
  static LstmModel initialize(const NetConfig& config, NormStats norm);
  void validate() const;
  bool operator==(const LstmModel& o) const {
    return config == o.config && norm == o.norm && params == o.params;
  }
};

/// Versioned JSON: {version, net_config, norm_stats, parameters}; parameter
/// arrays are flat and row-major. The file is written to a temporary and renamed.
void save_model(const LstmModel& model, const std::filesystem::path& path);
std::string model_to_json(const LstmModel& model);

/// Throws FormatError on corrupt or version-mismatched files.
LstmModel load_model(const std::filesystem::path& path);
/// Also throws FormatError when the stored NetConfig differs from `expected`.
LstmModel load_model(const std::filesystem::path& path, const NetConfig& expected);
LstmModel model_from_json(std::string_view text);

}  // namespace mtt::deepda

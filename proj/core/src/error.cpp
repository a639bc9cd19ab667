#include "mtt/error.hpp"

namespace mtt {

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error("invalid field '" + field + "': " + message), field_(std::move(field)), message_(message) {}

}  // namespace mtt

#pragma once

#include <stdexcept>
#include <string>

namespace samba {

// Invalid user-supplied configuration (bad parameter values, malformed
// experiment files). The CLI maps this to exit status 2. `key` names the
// offending configuration entry when one is known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::invalid_argument(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace samba

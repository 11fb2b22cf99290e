#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace mbinv {

enum class ErrorKind {
  invalid_argument,
  parse,
  size,
  io,
  dimension,
  branch,
  low_confidence,
  singular_filter,
  inconsistent_frames,
  division,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        nlohmann::json diagnostics = nlohmann::json::object());

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorKind kind_;
  nlohmann::json diagnostics_;
};

// Non-fatal diagnostics. Default sink writes "warning: <msg>" to stderr.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace mbinv

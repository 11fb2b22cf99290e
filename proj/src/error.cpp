#include "mbinv/error.hpp"

#include <iostream>
#include <mutex>

namespace mbinv {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::size: return "size";
    case ErrorKind::io: return "io";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::branch: return "branch";
    case ErrorKind::low_confidence: return "low_confidence";
    case ErrorKind::singular_filter: return "singular_filter";
    case ErrorKind::inconsistent_frames: return "inconsistent_frames";
    case ErrorKind::division: return "division";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::json diagnostics)
    : std::runtime_error(message), kind_(kind), diagnostics_(std::move(diagnostics)) {}

namespace {
std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}
WarningSink& sink_ref() {
  static WarningSink s;
  return s;
}
}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  sink_ref() = std::move(sink);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (sink_ref()) {
    sink_ref()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace mbinv

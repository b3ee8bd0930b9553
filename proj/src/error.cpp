#include "strokepath/error.hpp"

#include <algorithm>

namespace strokepath {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::invalid_pixel: return "invalid pixel";
    case ErrorCode::out_of_bounds: return "out of bounds";
    case ErrorCode::behind_camera: return "behind camera";
    case ErrorCode::render_diverged: return "render error";
    case ErrorCode::format: return "format error";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::uninterpolatable_gap: return "uninterpolatable gap";
    case ErrorCode::singular_fit: return "singular fit";
    case ErrorCode::domain_too_short: return "domain too short";
    case ErrorCode::ordering: return "ordering error";
    case ErrorCode::unsupported_transform: return "unsupported transform";
    case ErrorCode::degenerate_path: return "degenerate path";
    case ErrorCode::coverage: return "coverage error";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::config: return "config error";
  }
  return "error";
}

namespace {

std::string one_line(ErrorCode code, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::replace(message.begin(), message.end(), '\r', ' ');
  return std::string(to_string(code)) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(one_line(code, message)), code_(code) {}

}  // namespace strokepath

#pragma once

#include <stdexcept>
#include <string>

namespace strokepath {

enum class ErrorCode {
  invalid_input,
  invalid_pixel,
  out_of_bounds,
  behind_camera,
  render_diverged,
  format,
  io,
  insufficient_data,
  uninterpolatable_gap,
  singular_fit,
  domain_too_short,
  ordering,
  unsupported_transform,
  degenerate_path,
  coverage,
  empty_input,
  config,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable error kind. what() is always a
/// single line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace strokepath

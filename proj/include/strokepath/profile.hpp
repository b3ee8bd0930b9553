#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

#include "strokepath/depthcam.hpp"

namespace strokepath {

/// Vertical stroke segment in the depth image: one column, rows
/// v_start..v_end inclusive.
struct StrokeLine {
  int u = 0;
  int v_start = 0;
  int v_end = 0;

  void validate(int width, int height) const;

  friend bool operator==(const StrokeLine&, const StrokeLine&) = default;
};

/// Parses "u,v_start,v_end".
StrokeLine parse_stroke_line(const std::string& arg);

/// Back shape along the stroke: camera-frame (y, z) samples in meters,
/// y strictly increasing, at least 4 samples.
struct BackProfile {
  double x_fixed = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd z;

  Eigen::Index size() const noexcept { return y.size(); }
  void validate() const;
};

inline constexpr Eigen::Index kMinProfileSamples = 4;

/// Deprojects the column segment. Invalid pixels strictly inside the
/// segment get depth linearly interpolated from the nearest valid rows.
BackProfile extract_profile(const DepthImage& img, const StrokeLine& line, const CameraIntrinsics& k);

/// CSV with header `y_m,z_m`, preceded by a `# x_fixed=<m>` line.
void write_profile(std::ostream& out, const BackProfile& profile);
BackProfile read_profile(std::istream& in);
void save_profile(const BackProfile& profile, const std::filesystem::path& path);
BackProfile load_profile(const std::filesystem::path& path);

}  // namespace strokepath

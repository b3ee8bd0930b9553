#include "strokepath/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "strokepath/config.hpp"
#include "strokepath/error.hpp"

namespace strokepath {

void StrokeLine::validate(int width, int height) const {
  if (u < 0 || u >= width) {
    throw Error(ErrorCode::out_of_bounds, "stroke column " + std::to_string(u) + " outside the image");
  }
  if (v_start < 0 || v_end >= height) {
    throw Error(ErrorCode::out_of_bounds, "stroke rows outside the image");
  }
  if (!(v_start < v_end)) {
    throw Error(ErrorCode::invalid_input, "stroke line needs v_start < v_end");
  }
}

StrokeLine parse_stroke_line(const std::string& arg) {
  const auto fields = text::split(arg, ',');
  if (fields.size() != 3) {
    throw Error(ErrorCode::config, "stroke line must be u,v_start,v_end");
  }
  std::array<int, 3> values{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto v = text::parse_int(fields[i]);
    if (!v || *v < 0 || *v > (1 << 24)) {
      throw Error(ErrorCode::config, "stroke line entry '" + std::string(fields[i]) + "' is not a pixel index");
    }
    values[i] = static_cast<int>(*v);
  }
  return {values[0], values[1], values[2]};
}

void BackProfile::validate() const {
  if (y.size() != z.size()) {
    throw Error(ErrorCode::invalid_input, "profile y and z lengths differ");
  }
  if (y.size() < kMinProfileSamples) {
    throw Error(ErrorCode::insufficient_data, "profile needs at least 4 samples");
  }
  if (!y.allFinite() || !z.allFinite() || !std::isfinite(x_fixed)) {
    throw Error(ErrorCode::invalid_input, "non-finite profile sample");
  }
  for (Eigen::Index i = 1; i < y.size(); ++i) {
    if (!(y[i] > y[i - 1])) {
      throw Error(ErrorCode::ordering, "profile y must be strictly increasing");
    }
  }
}

BackProfile extract_profile(const DepthImage& img, const StrokeLine& line, const CameraIntrinsics& k) {
  k.validate();
  if (img.width() != k.width || img.height() != k.height) {
    throw Error(ErrorCode::invalid_input, "depth image size does not match the camera intrinsics");
  }
  line.validate(img.width(), img.height());

  const int n = line.v_end - line.v_start + 1;
  std::vector<double> depth(static_cast<std::size_t>(n));
  std::vector<int> valid_rows;
  for (int i = 0; i < n; ++i) {
    depth[i] = img.at(line.u, line.v_start + i);
    if (depth[i] > 0.0) {
      valid_rows.push_back(i);
    }
  }
  if (static_cast<Eigen::Index>(valid_rows.size()) < kMinProfileSamples) {
    throw Error(ErrorCode::insufficient_data, "only " + std::to_string(valid_rows.size()) +
                                                  " valid depth pixels on the stroke line (need 4)");
  }
  if (!(depth.front() > 0.0) || !(depth.back() > 0.0)) {
    throw Error(ErrorCode::uninterpolatable_gap, "stroke line endpoint has no valid depth");
  }

  // Linear fill between the valid rows bracketing each gap.
  for (std::size_t g = 1; g < valid_rows.size(); ++g) {
    const int lo = valid_rows[g - 1];
    const int hi = valid_rows[g];
    for (int i = lo + 1; i < hi; ++i) {
      const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      depth[i] = depth[lo] + t * (depth[hi] - depth[lo]);
    }
  }

  std::vector<Point3> points;
  points.reserve(depth.size());
  for (int i = 0; i < n; ++i) {
    points.push_back(deproject(line.u, line.v_start + i, depth[i], k));
  }
  std::stable_sort(points.begin(), points.end(), [](const Point3& a, const Point3& b) { return a.y() < b.y(); });

  BackProfile profile;
  profile.y.resize(n);
  profile.z.resize(n);
  double x_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    profile.y[i] = points[i].y();
    profile.z[i] = points[i].z();
    x_sum += points[i].x();
  }
  profile.x_fixed = x_sum / n;
  profile.validate();
  return profile;
}

void write_profile(std::ostream& out, const BackProfile& profile) {
  profile.validate();
  out << "# x_fixed=" << text::format_double(profile.x_fixed) << "\n";
  out << "y_m,z_m\n";
  for (Eigen::Index i = 0; i < profile.size(); ++i) {
    out << text::format_double(profile.y[i]) << ',' << text::format_double(profile.z[i]) << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::io, "failed writing profile");
  }
}

BackProfile read_profile(std::istream& in) {
  std::string line;
  std::optional<double> x_fixed;
  bool header = false;
  std::vector<double> ys;
  std::vector<double> zs;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) {
      continue;
    }
    if (body.front() == '#') {
      const auto kv = body.substr(1);
      const auto eq = kv.find('=');
      if (eq != std::string_view::npos && text::trim(kv.substr(0, eq)) == "x_fixed") {
        x_fixed = text::parse_double(kv.substr(eq + 1));
        if (!x_fixed) {
          throw Error(ErrorCode::format, "profile line " + std::to_string(line_no) + ": bad x_fixed");
        }
      }
      continue;
    }
    if (!header) {
      if (body != "y_m,z_m") {
        throw Error(ErrorCode::format, "profile header must be 'y_m,z_m'");
      }
      header = true;
      continue;
    }
    const auto fields = text::split(body, ',');
    const auto y = fields.size() == 2 ? text::parse_double(fields[0]) : std::nullopt;
    const auto z = fields.size() == 2 ? text::parse_double(fields[1]) : std::nullopt;
    if (!y || !z) {
      throw Error(ErrorCode::format, "profile line " + std::to_string(line_no) + ": expected two numbers");
    }
    ys.push_back(*y);
    zs.push_back(*z);
  }
  if (!header || !x_fixed) {
    throw Error(ErrorCode::format, "profile is missing its header or x_fixed line");
  }
  BackProfile profile;
  profile.x_fixed = *x_fixed;
  profile.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  profile.z = Eigen::Map<const Eigen::VectorXd>(zs.data(), static_cast<Eigen::Index>(zs.size()));
  profile.validate();
  return profile;
}

void save_profile(const BackProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_profile(out, profile);
}

BackProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return read_profile(in);
}

}  // namespace strokepath

#include "strokepath/depthcam.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "strokepath/error.hpp"

namespace strokepath {

void CameraIntrinsics::validate() const {
  if (!(std::isfinite(fx) && std::isfinite(fy) && fx > 0.0 && fy > 0.0)) {
    throw Error(ErrorCode::invalid_input, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_input, "image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw Error(ErrorCode::invalid_input, "principal point outside the image");
  }
}

DepthImage::DepthImage(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_input, "image size must be positive");
  }
  data_ = DepthArray::Zero(height, width);
}

DepthImage::DepthImage(DepthArray depth_mm) : data_(std::move(depth_mm)) {
  if (data_.size() == 0) {
    throw Error(ErrorCode::invalid_input, "empty depth image");
  }
  if (!data_.allFinite() || (data_ < 0.0).any()) {
    throw Error(ErrorCode::invalid_input, "depth values must be finite and non-negative");
  }
}

double DepthImage::at(int u, int v) const {
  if (!contains(u, v)) {
    throw Error(ErrorCode::out_of_bounds, "pixel (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  return data_(v, u);
}

void DepthImage::set(int u, int v, double depth_mm) {
  if (!contains(u, v)) {
    throw Error(ErrorCode::out_of_bounds, "pixel (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  if (!std::isfinite(depth_mm) || depth_mm < 0.0) {
    throw Error(ErrorCode::invalid_input, "depth must be finite and non-negative");
  }
  data_(v, u) = depth_mm;
}

void SyntheticScene::validate() const {
  intrinsics.validate();
  if (!std::isfinite(noise_sigma_mm) || noise_sigma_mm < 0.0) {
    throw Error(ErrorCode::invalid_input, "noise_sigma_mm must be >= 0");
  }
  const auto& s = surface;
  if (!(std::isfinite(s.a) && std::isfinite(s.b) && std::isfinite(s.c) && std::isfinite(s.d) &&
        std::isfinite(s.lateral))) {
    throw Error(ErrorCode::invalid_input, "surface coefficients must be finite");
  }
  if (!(s.d > 0.0)) {
    throw Error(ErrorCode::invalid_input, "surface must lie in front of the camera (d > 0)");
  }
}

Point3 deproject(double u, double v, double depth_mm, const CameraIntrinsics& k) {
  if (!(std::isfinite(u) && std::isfinite(v) && std::isfinite(depth_mm))) {
    throw Error(ErrorCode::invalid_input, "non-finite pixel or depth");
  }
  if (!(u >= 0.0 && v >= 0.0 && u < k.width && v < k.height)) {
    throw Error(ErrorCode::out_of_bounds, "pixel outside the image");
  }
  if (!(depth_mm > 0.0)) {
    throw Error(ErrorCode::invalid_pixel, "depth is zero (invalid pixel)");
  }
  const double z = depth_mm * 1e-3;
  return {(u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z};
}

PixelDepth project(const Point3& p, const CameraIntrinsics& k) {
  if (!p.allFinite()) {
    throw Error(ErrorCode::invalid_input, "non-finite point");
  }
  if (!(p.z() > 0.0)) {
    throw Error(ErrorCode::behind_camera, "point has z <= 0");
  }
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z() * 1e3};
}

namespace {

// Depth (m) where the ray through (u, v) meets the heightfield.
double solve_ray_depth(const SurfaceModel& surface, const CameraIntrinsics& k, int u, int v) {
  const double ray_x = (u - k.cx) / k.fx;
  const double ray_y = (v - k.cy) / k.fy;
  double z = surface.d;
  for (int it = 0; it < kRenderMaxIterations; ++it) {
    const double next = surface.depth(ray_x * z, ray_y * z);
    if (!(std::isfinite(next) && next > 0.0)) {
      throw Error(ErrorCode::render_diverged, "surface leaves the camera's half-space at pixel (" + std::to_string(u) +
                                                  ", " + std::to_string(v) + ")");
    }
    if (std::abs(next - z) < kRenderTolerance) {
      return next;
    }
    z = next;
  }
  throw Error(ErrorCode::render_diverged, "no convergence at pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                              "); surface too steep for the camera geometry");
}

}  // namespace

DepthImage render_synthetic(const SyntheticScene& scene) {
  scene.validate();
  const auto& k = scene.intrinsics;
  DepthArray depth(k.height, k.width);
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      depth(v, u) = solve_ray_depth(scene.surface, k, u, v) * 1e3;
    }
  }
  if (scene.noise_sigma_mm > 0.0) {
    std::mt19937_64 rng(scene.seed);
    std::normal_distribution<double> noise(0.0, scene.noise_sigma_mm);
    for (Eigen::Index i = 0; i < depth.size(); ++i) {
      depth.data()[i] = std::max(kMinNoisyDepthMm, depth.data()[i] + noise(rng));
    }
  }
  return DepthImage(std::move(depth));
}

DepthImage quantize(const DepthImage& img) { return DepthImage(img.data().round()); }

void write_depth_image(std::ostream& out, const DepthImage& img) {
  if (img.data().size() == 0) {
    throw Error(ErrorCode::invalid_input, "empty depth image");
  }
  if ((img.data() > 65535.0).any()) {
    throw Error(ErrorCode::invalid_input, "depth exceeds 65535 mm");
  }
  out << "P5\n" << img.width() << ' ' << img.height() << "\n65535\n";
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(img.data().size()) * 2);
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      const auto sample = static_cast<std::uint16_t>(std::lround(img.data()(v, u)));
      bytes.push_back(static_cast<char>(sample >> 8));
      bytes.push_back(static_cast<char>(sample & 0xff));
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::io, "failed writing depth image");
  }
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string token;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) {
        break;
      }
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

int pgm_positive(std::istream& in, const char* what) {
  const auto value = text::parse_int(pgm_token(in));
  if (!value || *value <= 0 || *value > (1 << 24)) {
    throw Error(ErrorCode::format, std::string("bad PGM ") + what);
  }
  return static_cast<int>(*value);
}

}  // namespace

DepthImage read_depth_image(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw Error(ErrorCode::format, "not a binary PGM (expected P5 magic)");
  }
  const int width = pgm_positive(in, "width");
  const int height = pgm_positive(in, "height");
  const int maxval = pgm_positive(in, "maxval");
  if (maxval != 65535) {
    throw Error(ErrorCode::format, "expected maxval 65535, got " + std::to_string(maxval));
  }
  // pgm_token consumed the single whitespace byte after maxval.
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::string bytes(count * 2, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw Error(ErrorCode::format, "truncated PGM data");
  }
  DepthArray depth(height, width);
  for (std::size_t i = 0; i < count; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[2 * i + 1]);
    depth.data()[i] = static_cast<double>((hi << 8) | lo);
  }
  return DepthImage(std::move(depth));
}

void save_depth_image(const DepthImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_depth_image(out, img);
}

DepthImage load_depth_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return read_depth_image(in);
}

CameraIntrinsics intrinsics_from_config(const KeyValueConfig& cfg) {
  CameraIntrinsics k;
  k.fx = cfg.get_double_or("camera.fx", k.fx);
  k.fy = cfg.get_double_or("camera.fy", k.fy);
  k.width = static_cast<int>(cfg.get_int_or("camera.width", k.width));
  k.height = static_cast<int>(cfg.get_int_or("camera.height", k.height));
  k.cx = cfg.get_double_or("camera.cx", k.cx);
  k.cy = cfg.get_double_or("camera.cy", k.cy);
  k.validate();
  return k;
}

SyntheticScene scene_from_config(const KeyValueConfig& cfg) {
  SyntheticScene scene;
  scene.surface.a = cfg.get_double_or("surface.a", scene.surface.a);
  scene.surface.b = cfg.get_double_or("surface.b", scene.surface.b);
  scene.surface.c = cfg.get_double_or("surface.c", scene.surface.c);
  scene.surface.d = cfg.get_double_or("surface.d", scene.surface.d);
  scene.surface.lateral = cfg.get_double_or("surface.lateral", scene.surface.lateral);
  scene.noise_sigma_mm = cfg.get_double_or("noise_sigma_mm", scene.noise_sigma_mm);
  const auto seed = cfg.get_int_or("seed", 0);
  if (seed < 0) {
    throw Error(ErrorCode::config, cfg.source() + ": seed must be non-negative");
  }
  scene.seed = static_cast<std::uint64_t>(seed);
  scene.intrinsics = intrinsics_from_config(cfg);
  scene.validate();
  return scene;
}

}  // namespace strokepath

/**
 * @file depthcam.hpp
 * @brief Pinhole depth camera: deprojection, projection, depth-image files
 *        and a synthetic back-surface renderer.
 *
 * Depth values are millimeters along the optical axis, 0 marks an invalid
 * pixel. 3D points come out in meters in the camera frame.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "strokepath/config.hpp"
#include "strokepath/geometry.hpp"

namespace strokepath {

struct CameraIntrinsics {
  double fx = 600.0;  ///< focal length, px
  double fy = 600.0;
  double cx = 320.0;  ///< principal point, px
  double cy = 240.0;
  int width = 640;
  int height = 480;

  /// Throws invalid_input unless fx, fy > 0 and the principal point is
  /// inside the image.
  void validate() const;

  /// 640x480, f = 600 px, principal point at the image center.
  static CameraIntrinsics desk_default() { return {}; }

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

using DepthArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-major depth grid in millimeters; rows are image v, columns image u.
class DepthImage {
 public:
  DepthImage() = default;
  /// All-invalid (zero) image.
  DepthImage(int width, int height);
  /// Takes ownership of `depth_mm`; values must be finite and >= 0.
  explicit DepthImage(DepthArray depth_mm);

  int width() const noexcept { return static_cast<int>(data_.cols()); }
  int height() const noexcept { return static_cast<int>(data_.rows()); }

  double at(int u, int v) const;
  void set(int u, int v, double depth_mm);
  bool is_valid(int u, int v) const { return at(u, v) > 0.0; }
  bool contains(int u, int v) const noexcept { return u >= 0 && v >= 0 && u < width() && v < height(); }

  const DepthArray& data() const noexcept { return data_; }

  friend bool operator==(const DepthImage& a, const DepthImage& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() && (a.data_ == b.data_).all();
  }

 private:
  DepthArray data_;
};

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth_mm = 0.0;
};

/// Heightfield z = a y^3 + b y^2 + c y + d + lateral x^2 in camera-frame
/// meters. The cubic runs along the vertical image axis; `lateral` bends
/// the surface across the stroke.
struct SurfaceModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.5;
  double lateral = 0.0;

  double depth(double x, double y) const { return ((a * y + b) * y + c) * y + d + lateral * x * x; }
  double slope_x(double x) const { return 2.0 * lateral * x; }
  double slope_y(double y) const { return (3.0 * a * y + 2.0 * b) * y + c; }

  /// Normal of the heightfield, oriented to +z: normalize(-dz/dx, -dz/dy, 1).
  UnitVec3 normal(double x, double y) const { return UnitVec3::normalized(Vec3(-slope_x(x), -slope_y(y), 1.0)); }

  friend bool operator==(const SurfaceModel&, const SurfaceModel&) = default;
};

struct SyntheticScene {
  SurfaceModel surface;
  double noise_sigma_mm = 0.0;
  CameraIntrinsics intrinsics;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const SyntheticScene&, const SyntheticScene&) = default;
};

/// Heightfield solve settings for render_synthetic.
inline constexpr double kRenderTolerance = 1e-7;  // m
inline constexpr int kRenderMaxIterations = 50;
/// Noisy depths are clamped to at least this, so noise never marks a pixel
/// invalid.
inline constexpr double kMinNoisyDepthMm = 0.1;

/// Pixel (u, v) at `depth_mm` -> camera-frame point in meters.
Point3 deproject(double u, double v, double depth_mm, const CameraIntrinsics& k);

PixelDepth project(const Point3& p, const CameraIntrinsics& k);

/// Renders the scene's depth as seen by its camera. Deterministic in the
/// scene (including seed).
DepthImage render_synthetic(const SyntheticScene& scene);

/// Rounds every depth to whole millimeters, as written to disk.
DepthImage quantize(const DepthImage& img);

/// Binary PGM (P5), maxval 65535, big-endian 16-bit samples, 1 mm units.
void write_depth_image(std::ostream& out, const DepthImage& img);
DepthImage read_depth_image(std::istream& in);
void save_depth_image(const DepthImage& img, const std::filesystem::path& path);
DepthImage load_depth_image(const std::filesystem::path& path);

/// Keys: surface.{a,b,c,d,lateral}, noise_sigma_mm, seed,
/// camera.{fx,fy,cx,cy,width,height}. Missing keys take the desk defaults.
SyntheticScene scene_from_config(const KeyValueConfig& cfg);
CameraIntrinsics intrinsics_from_config(const KeyValueConfig& cfg);

}  // namespace strokepath

/**
 * @file trajgen.hpp
 * @brief Stroke trajectory from a fitted back curve.
 *
 * Waypoints are laid on the curve every `step` meters of height y, each
 * carries the end-effector pitch about the frame x axis (the slope angle of
 * the segment arriving at it), and timestamps follow a constant path speed.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "strokepath/curvefit.hpp"
#include "strokepath/geometry.hpp"

namespace strokepath {

inline constexpr double kDefaultStep = 0.001;   // m
inline constexpr double kSlowSpeed = 0.028;     // m/s
inline constexpr double kMediumSpeed = 0.085;   // m/s

enum class Frame { camera, robot };

const char* to_string(Frame frame) noexcept;
Frame frame_from_string(std::string_view name);

struct Waypoint {
  Point3 position;
  double pitch = 0.0;  ///< radians about the frame x axis, in (-pi/2, pi/2)
  double time = 0.0;   ///< seconds from the start

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;
  Frame frame = Frame::camera;
  double speed = kMediumSpeed;  ///< m/s
  CubicCurve curve;             ///< generating curve, camera frame

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Points (x_fixed, y_i, cubic(y_i)) with y_i = y_min + i * step; the last
/// point sits exactly on y_max.
std::vector<Point3> generate_waypoints(const CubicCurve& curve, double x_fixed, double step = kDefaultStep);

/// pitch_i = atan((z_i - z_{i-1}) / (y_i - y_{i-1})) for i >= 1, and
/// pitch_0 = pitch_1. Requires y strictly increasing.
std::vector<double> compute_pitch(std::span<const Point3> points);

/// Sets time_i = (polyline length up to waypoint i) / speed.
Trajectory timestamp(Trajectory traj, double speed);

/// Waypoints, pitches and timestamps in the camera frame.
Trajectory build_trajectory(const CubicCurve& curve, double x_fixed, double step = kDefaultStep,
                            double speed = kMediumSpeed);

/// Maps a camera-frame trajectory into the robot frame. The rotation must
/// keep the camera x axis as the robot x axis (within 1e-6) so the stroke
/// plane, and therefore the single pitch angle, survives the change.
Trajectory to_robot_frame(const Trajectory& traj, const RigidTransform& camera_to_robot);

/// Angle (radians) of the x-axis rotation inside `camera_to_robot`; throws
/// unsupported_transform if the rotation moves the x axis.
double stroke_plane_rotation(const RigidTransform& camera_to_robot);

double path_length(const Trajectory& traj);

/// CSV: `index,time_s,frame,x_m,y_m,z_m,pitch_rad`, preceded by
/// `# key=value` lines carrying speed and the generating curve.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

/// Key-value file with `rotation` (9 numbers, row-major) and `translation`
/// (3 numbers, meters).
RigidTransform transform_from_config(const KeyValueConfig& cfg);
RigidTransform load_transform(const std::filesystem::path& path);
void write_transform(std::ostream& out, const RigidTransform& t);

}  // namespace strokepath

/**
 * @file eval.hpp
 * @brief Normal-mismatch evaluation of stroke trajectories and recorded
 *        normal traces.
 *
 * The error at a point is the angle between the back-surface normal B and
 * the end-effector normal E. Both are oriented toward +z of the camera
 * frame; a pair more than 90 degrees apart is counted as a hemisphere
 * mismatch rather than flipped.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strokepath/curvefit.hpp"
#include "strokepath/depthcam.hpp"
#include "strokepath/trajgen.hpp"

namespace strokepath {

/// Published measurements, kept for side-by-side display in reports.
namespace reference_values {
inline constexpr double kRobotMeanDeg = 5.97;
inline constexpr double kRobotMaxDeg = 8.26;
inline constexpr double kHuman1MeanDeg = 4.78;
inline constexpr double kHuman2MeanDeg = 5.52;
inline constexpr double kHuman1MaxDeg = 7.30;
inline constexpr double kHuman2MaxDeg = 8.13;
}  // namespace reference_values

struct NormalSample {
  double y = 0.0;       ///< m
  UnitVec3 surface;     ///< B
  UnitVec3 effector;    ///< E (or a hand normal H)

  friend bool operator==(const NormalSample&, const NormalSample&) = default;
};

struct NormalTrace {
  std::vector<NormalSample> entries;

  void validate() const;

  friend bool operator==(const NormalTrace&, const NormalTrace&) = default;
};

struct ErrorStats {
  std::vector<double> per_point;  ///< degrees
  double mean = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::size_t hemisphere_mismatches = 0;  ///< points with error > 90 degrees

  friend bool operator==(const ErrorStats&, const ErrorStats&) = default;
};

/// Reference surface for evaluation.
using Reference = std::variant<CubicCurve, SyntheticScene>;

ErrorStats summarize_errors(std::vector<double> per_point_deg);
/// All points of all inputs as one population.
ErrorStats pool(std::span<const ErrorStats> parts);

/// normalize(0, -z'(y), 1)
UnitVec3 surface_normal(const CubicCurve& curve, double y);
/// Heightfield normal including lateral curvature.
UnitVec3 surface_normal(const SyntheticScene& scene, double x, double y);
/// (0, -sin(pitch), cos(pitch))
UnitVec3 effector_normal(double pitch);

/// Pairs each waypoint of a camera-frame trajectory with the reference
/// normal under it.
NormalTrace normal_trace(const Trajectory& traj, const Reference& reference);
/// Same for a robot-frame trajectory; normals are expressed in the robot
/// frame and `y` stays the camera-frame height.
NormalTrace normal_trace(const Trajectory& robot_traj, const Reference& reference,
                         const RigidTransform& camera_to_robot);

/// Rotates every B and E by the transform's rotation.
NormalTrace transform_trace(const NormalTrace& trace, const RigidTransform& t);

ErrorStats evaluate_trace(const NormalTrace& trace);
ErrorStats evaluate_trajectory(const Trajectory& traj, const Reference& reference);
ErrorStats evaluate_trajectory(const Trajectory& robot_traj, const Reference& reference,
                               const RigidTransform& camera_to_robot);

/// Independent per-trace statistics; no cross-trace alignment.
std::pair<ErrorStats, ErrorStats> compare_traces(const NormalTrace& a, const NormalTrace& b);

/// CSV with header `y_m,Bx,By,Bz,Ex,Ey,Ez`.
void write_trace(std::ostream& out, const NormalTrace& trace);
NormalTrace read_trace(std::istream& in);
void save_trace(const NormalTrace& trace, const std::filesystem::path& path);
NormalTrace load_trace(const std::filesystem::path& path);

/// Ordered key/value pairs echoed into a report (generation parameters,
/// input files, per-trace summaries).
using ReportContext = std::vector<std::pair<std::string, std::string>>;

struct Report {
  ErrorStats stats;
  ReportContext context;

  friend bool operator==(const Report&, const Report&) = default;
};

/**
 * Line-oriented `key=value` report:
 *
 *   format=strokepath-report/1
 *   count, mean_deg, max_deg, hemisphere_mismatches, per_point_deg
 *   context.<key>=<value>     one per context entry, in order
 *   reference.<name>_deg      published values for comparison
 */
void write_report(std::ostream& out, const ErrorStats& stats, const ReportContext& context);
Report read_report(std::istream& in);
void save_report(const std::filesystem::path& path, const ErrorStats& stats, const ReportContext& context);
Report load_report(const std::filesystem::path& path);

}  // namespace strokepath

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "strokepath/depthcam.hpp"
#include "strokepath/eval.hpp"
#include "strokepath/profile.hpp"
#include "strokepath/trajgen.hpp"

namespace strokepath {

struct PipelineConfig {
  SyntheticScene scene;
  StrokeLine line;
  double step = kDefaultStep;    // m
  double speed = kMediumSpeed;   // m/s
  std::optional<std::filesystem::path> depth_path;      // replaces rendering
  std::optional<std::filesystem::path> transform_path;  // camera -> robot
};

/// Vertical line through the principal point covering +-0.1 m at the
/// scene's nominal depth, clipped to the image.
StrokeLine default_stroke_line(const SyntheticScene& scene);

/// Scene keys (see scene_from_config) plus `stroke.line = u,v0,v1`,
/// `step_mm`, `speed_mps`, `depth` and `transform` (paths relative to the
/// config file).
PipelineConfig pipeline_config_from(const KeyValueConfig& cfg);

/// Parses a speed given as m/s or as `slow` / `medium`.
double parse_speed(const std::string& text);

struct PipelineResult {
  DepthImage depth;
  BackProfile profile;
  CubicCurve curve;
  Trajectory trajectory;  ///< camera frame
  std::optional<RigidTransform> camera_to_robot;
  std::optional<Trajectory> robot_trajectory;
  Reference reference;    ///< scene when rendered, fitted curve for file input
  ErrorStats stats;
  ReportContext context;
};

/// depth (rendered or given) -> profile -> cubic -> trajectory -> errors.
PipelineResult run_pipeline(const PipelineConfig& cfg, const std::optional<DepthImage>& depth = std::nullopt,
                            const std::optional<RigidTransform>& camera_to_robot = std::nullopt);

/// depth.pgm, profile.csv, curve.txt, trajectory.csv,
/// [trajectory_robot.csv], report.txt
void write_pipeline_artifacts(const PipelineResult& result, const std::filesystem::path& out_dir);

}  // namespace strokepath

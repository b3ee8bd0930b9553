#include "strokepath/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "strokepath/curvefit.hpp"
#include "strokepath/error.hpp"

namespace strokepath {

StrokeLine default_stroke_line(const SyntheticScene& scene) {
  const auto& k = scene.intrinsics;
  const int half_rows = static_cast<int>(std::lround(0.1 * k.fy / scene.surface.d));
  const int center = static_cast<int>(std::lround(k.cy));
  StrokeLine line;
  line.u = std::clamp(static_cast<int>(std::lround(k.cx)), 0, k.width - 1);
  line.v_start = std::clamp(center - half_rows, 0, k.height - 1);
  line.v_end = std::clamp(center + half_rows, 0, k.height - 1);
  return line;
}

double parse_speed(const std::string& arg) {
  if (arg == "slow") {
    return kSlowSpeed;
  }
  if (arg == "medium") {
    return kMediumSpeed;
  }
  const auto value = text::parse_double(arg);
  if (!value || !std::isfinite(*value) || *value <= 0.0) {
    throw Error(ErrorCode::config, "speed must be a positive number of m/s, 'slow' or 'medium'");
  }
  return *value;
}

PipelineConfig pipeline_config_from(const KeyValueConfig& cfg) {
  PipelineConfig pc;
  pc.scene = scene_from_config(cfg);
  pc.line = cfg.contains("stroke.line") ? parse_stroke_line(cfg.get_string("stroke.line"))
                                        : default_stroke_line(pc.scene);
  pc.step = cfg.get_double_or("step_mm", kDefaultStep * 1e3) * 1e-3;
  if (!(pc.step > 0.0)) {
    throw Error(ErrorCode::config, cfg.source() + ": step_mm must be positive");
  }
  if (cfg.contains("speed_mps")) {
    pc.speed = parse_speed(cfg.get_string("speed_mps"));
  }
  const auto base = std::filesystem::path(cfg.source()).parent_path();
  if (cfg.contains("depth")) {
    pc.depth_path = base / cfg.get_string("depth");
  }
  if (cfg.contains("transform")) {
    pc.transform_path = base / cfg.get_string("transform");
  }
  return pc;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, const std::optional<DepthImage>& depth,
                            const std::optional<RigidTransform>& camera_to_robot) {
  using text::format_double;
  PipelineResult r;
  const bool rendered = !depth.has_value();
  r.depth = rendered ? render_synthetic(cfg.scene) : *depth;
  r.profile = extract_profile(r.depth, cfg.line, cfg.scene.intrinsics);
  r.curve = fit_cubic(r.profile);
  r.trajectory = build_trajectory(r.curve, r.profile.x_fixed, cfg.step, cfg.speed);
  if (rendered) {
    r.reference = cfg.scene;
  } else {
    r.reference = r.curve;
  }
  r.stats = evaluate_trajectory(r.trajectory, r.reference);
  if (camera_to_robot) {
    r.camera_to_robot = camera_to_robot;
    r.robot_trajectory = to_robot_frame(r.trajectory, *camera_to_robot);
  }

  const auto& line = cfg.line;
  r.context = {
      {"depth_source", rendered ? "synthetic" : "file"},
      {"reference", rendered ? "scene" : "fitted_curve"},
      {"stroke_line", std::to_string(line.u) + "," + std::to_string(line.v_start) + "," + std::to_string(line.v_end)},
      {"step_m", format_double(cfg.step)},
      {"speed_mps", format_double(cfg.speed)},
      {"waypoints", std::to_string(r.trajectory.waypoints.size())},
      {"path_length_m", format_double(path_length(r.trajectory))},
      {"duration_s", format_double(r.trajectory.waypoints.back().time)},
      {"curve.a", format_double(r.curve.a)},
      {"curve.b", format_double(r.curve.b)},
      {"curve.c", format_double(r.curve.c)},
      {"curve.d", format_double(r.curve.d)},
      {"curve.y_min", format_double(r.curve.y_min)},
      {"curve.y_max", format_double(r.curve.y_max)},
      {"curve.rms_residual", format_double(r.curve.rms_residual)},
  };
  if (rendered) {
    r.context.emplace_back("scene.noise_sigma_mm", format_double(cfg.scene.noise_sigma_mm));
    r.context.emplace_back("scene.seed", std::to_string(cfg.scene.seed));
  }
  return r;
}

void write_pipeline_artifacts(const PipelineResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::io, "cannot create '" + out_dir.string() + "': " + ec.message());
  }
  save_depth_image(quantize(result.depth), out_dir / "depth.pgm");
  save_profile(result.profile, out_dir / "profile.csv");
  save_curve({result.curve, result.profile.x_fixed}, out_dir / "curve.txt");
  save_trajectory(result.trajectory, out_dir / "trajectory.csv");
  if (result.robot_trajectory) {
    save_trajectory(*result.robot_trajectory, out_dir / "trajectory_robot.csv");
  }
  save_report(out_dir / "report.txt", result.stats, result.context);
}

}  // namespace strokepath

#include "strokepath/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "strokepath/config.hpp"
#include "strokepath/curvefit.hpp"
#include "strokepath/depthcam.hpp"
#include "strokepath/error.hpp"
#include "strokepath/eval.hpp"
#include "strokepath/pipeline.hpp"
#include "strokepath/profile.hpp"
#include "strokepath/trajgen.hpp"

namespace strokepath {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string depth;
  std::string line;
  std::string transform;
  std::string out = ".";
  std::string speed;
  std::string profile;
  std::string curve;
  std::string trajectory;
  std::vector<std::string> traces;
  double step_mm = kDefaultStep * 1e3;
  std::uint64_t seed = 0;

  CLI::Option* step_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

std::optional<KeyValueConfig> load_config(const Options& o) {
  if (o.config.empty()) {
    return std::nullopt;
  }
  return KeyValueConfig::load(o.config);
}

fs::path in_or_default(const std::string& given, const Options& o, const char* name) {
  return given.empty() ? fs::path(o.out) / name : fs::path(given);
}

void ensure_out_dir(const Options& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) {
    throw Error(ErrorCode::io, "cannot create '" + o.out + "': " + ec.message());
  }
}

SyntheticScene scene_or_default(const std::optional<KeyValueConfig>& cfg) {
  return cfg ? scene_from_config(*cfg) : SyntheticScene{};
}

double resolve_step(const Options& o, const std::optional<KeyValueConfig>& cfg) {
  double step_mm = o.step_mm;
  if (o.step_opt->count() == 0 && cfg) {
    step_mm = cfg->get_double_or("step_mm", step_mm);
  }
  if (!(step_mm > 0.0) || !std::isfinite(step_mm)) {
    throw Error(ErrorCode::config, "--step-mm must be positive");
  }
  return step_mm * 1e-3;
}

double resolve_speed(const Options& o, const std::optional<KeyValueConfig>& cfg) {
  if (!o.speed.empty()) {
    return parse_speed(o.speed);
  }
  if (cfg && cfg->contains("speed_mps")) {
    return parse_speed(cfg->get_string("speed_mps"));
  }
  return kMediumSpeed;
}

std::optional<RigidTransform> resolve_transform(const Options& o, const std::optional<KeyValueConfig>& cfg) {
  if (!o.transform.empty()) {
    return load_transform(o.transform);
  }
  if (cfg && cfg->contains("transform")) {
    return load_transform(fs::path(cfg->source()).parent_path() / cfg->get_string("transform"));
  }
  return std::nullopt;
}

void print_stats(std::ostream& out, const ErrorStats& stats, const fs::path& report) {
  out << "mean " << text::format_double(stats.mean) << " deg, max " << text::format_double(stats.max) << " deg over "
      << stats.count << " points -> " << report.string() << '\n';
}

void cmd_synth(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o);
  if (!cfg) {
    throw Error(ErrorCode::config, "synth needs --config");
  }
  auto scene = scene_from_config(*cfg);
  if (o.seed_opt->count() > 0) {
    scene.seed = o.seed;
  }
  const auto img = quantize(render_synthetic(scene));
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "depth.pgm";
  save_depth_image(img, path);
  out << "wrote " << path.string() << " (" << img.width() << "x" << img.height() << ")\n";
}

void cmd_extract(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o);
  const auto scene = scene_or_default(cfg);
  StrokeLine line = default_stroke_line(scene);
  if (!o.line.empty()) {
    line = parse_stroke_line(o.line);
  } else if (cfg && cfg->contains("stroke.line")) {
    line = parse_stroke_line(cfg->get_string("stroke.line"));
  }
  const auto img = load_depth_image(in_or_default(o.depth, o, "depth.pgm"));
  const auto profile = extract_profile(img, line, scene.intrinsics);
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "profile.csv";
  save_profile(profile, path);
  out << "wrote " << path.string() << " (" << profile.size() << " samples)\n";
}

void cmd_fit(const Options& o, std::ostream& out) {
  const auto profile = load_profile(in_or_default(o.profile, o, "profile.csv"));
  const auto curve = fit_cubic(profile);
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "curve.txt";
  save_curve({curve, profile.x_fixed}, path);
  out << "wrote " << path.string() << " (rms residual " << text::format_double(curve.rms_residual) << " m)\n";
}

void cmd_gen(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o);
  const auto record = load_curve(in_or_default(o.curve, o, "curve.txt"));
  const auto traj = build_trajectory(record.curve, record.x_fixed, resolve_step(o, cfg), resolve_speed(o, cfg));
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "trajectory.csv";
  save_trajectory(traj, path);
  out << "wrote " << path.string() << " (" << traj.waypoints.size() << " waypoints, "
      << text::format_double(traj.waypoints.back().time) << " s)\n";
  if (const auto t = resolve_transform(o, cfg)) {
    const auto robot_path = fs::path(o.out) / "trajectory_robot.csv";
    save_trajectory(to_robot_frame(traj, *t), robot_path);
    out << "wrote " << robot_path.string() << '\n';
  }
}

void cmd_eval_traces(const Options& o, std::ostream& out) {
  std::vector<ErrorStats> parts;
  ReportContext context;
  for (std::size_t i = 0; i < o.traces.size(); ++i) {
    parts.push_back(evaluate_trace(load_trace(o.traces[i])));
    const std::string prefix = "trace." + std::to_string(i + 1) + ".";
    context.emplace_back(prefix + "file", fs::path(o.traces[i]).filename().string());
    context.emplace_back(prefix + "count", std::to_string(parts.back().count));
    context.emplace_back(prefix + "mean_deg", text::format_double(parts.back().mean));
    context.emplace_back(prefix + "max_deg", text::format_double(parts.back().max));
  }
  const auto pooled = pool(parts);
  context.insert(context.begin(), {"traces", std::to_string(parts.size())});
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "report.txt";
  save_report(path, pooled, context);
  print_stats(out, pooled, path);
}

void cmd_eval(const Options& o, std::ostream& out) {
  if (!o.traces.empty()) {
    cmd_eval_traces(o, out);
    return;
  }
  const auto cfg = load_config(o);
  const auto traj = load_trajectory(in_or_default(o.trajectory, o, "trajectory.csv"));
  Reference reference = traj.curve;
  std::string reference_name = "trajectory_curve";
  if (cfg) {
    reference = scene_from_config(*cfg);
    reference_name = "scene";
  } else if (!o.curve.empty()) {
    reference = load_curve(o.curve).curve;
    reference_name = "curve_file";
  }
  ErrorStats stats;
  if (traj.frame == Frame::robot) {
    const auto t = resolve_transform(o, cfg);
    if (!t) {
      throw Error(ErrorCode::config, "robot-frame trajectory needs --transform");
    }
    stats = evaluate_trajectory(traj, reference, *t);
  } else {
    stats = evaluate_trajectory(traj, reference);
  }
  const ReportContext context = {
      {"reference", reference_name},
      {"frame", to_string(traj.frame)},
      {"speed_mps", text::format_double(traj.speed)},
      {"waypoints", std::to_string(traj.waypoints.size())},
      {"duration_s", text::format_double(traj.waypoints.back().time)},
  };
  ensure_out_dir(o);
  const auto path = fs::path(o.out) / "report.txt";
  save_report(path, stats, context);
  print_stats(out, stats, path);
}

void cmd_pipeline(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o);
  if (!cfg) {
    throw Error(ErrorCode::config, "pipeline needs --config");
  }
  auto pc = pipeline_config_from(*cfg);
  if (o.seed_opt->count() > 0) {
    pc.scene.seed = o.seed;
  }
  if (!o.line.empty()) {
    pc.line = parse_stroke_line(o.line);
  }
  pc.step = resolve_step(o, cfg);
  pc.speed = resolve_speed(o, cfg);
  if (!o.depth.empty()) {
    pc.depth_path = o.depth;
  }
  std::optional<DepthImage> depth;
  if (pc.depth_path) {
    depth = load_depth_image(*pc.depth_path);
  }
  const auto result = run_pipeline(pc, depth, resolve_transform(o, cfg));
  write_pipeline_artifacts(result, o.out);
  print_stats(out, result.stats, fs::path(o.out) / "report.txt");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surface-following stroke trajectories from depth images", "strokepath"};
  app.require_subcommand(1);
  Options o;

  const auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory")->capture_default_str(); };
  const auto add_config = [&](CLI::App* sub) { sub->add_option("--config", o.config, "Scene / pipeline config file"); };
  const auto add_gen_opts = [&](CLI::App* sub) {
    sub->add_option("--speed-mps", o.speed, "Path speed in m/s, or slow / medium");
    sub->add_option("--transform", o.transform, "Camera-to-robot transform file");
    return sub->add_option("--step-mm", o.step_mm, "Waypoint spacing in y (mm)");
  };

  auto* synth = app.add_subcommand("synth", "Render a synthetic depth image");
  add_config(synth);
  o.seed_opt = synth->add_option("--seed", o.seed, "Override the noise seed");
  add_out(synth);

  auto* extract = app.add_subcommand("extract", "Extract the back profile along the stroke line");
  add_config(extract);
  extract->add_option("--depth", o.depth, "Depth image (default <out>/depth.pgm)");
  extract->add_option("--line", o.line, "Stroke line u,v_start,v_end");
  add_out(extract);

  auto* fit = app.add_subcommand("fit", "Fit the cubic back model to a profile");
  fit->add_option("--profile", o.profile, "Profile CSV (default <out>/profile.csv)");
  add_out(fit);

  auto* gen = app.add_subcommand("gen", "Generate the stroke trajectory from a curve");
  add_config(gen);
  gen->add_option("--curve", o.curve, "Curve file (default <out>/curve.txt)");
  auto* gen_step = add_gen_opts(gen);
  add_out(gen);

  auto* eval = app.add_subcommand("eval", "Evaluate normal mismatch of a trajectory or of recorded traces");
  add_config(eval);
  eval->add_option("--trajectory", o.trajectory, "Trajectory CSV (default <out>/trajectory.csv)");
  eval->add_option("--curve", o.curve, "Reference curve file");
  eval->add_option("--trace", o.traces, "Normal trace CSV; repeat for several recordings");
  eval->add_option("--transform", o.transform, "Camera-to-robot transform for robot-frame trajectories");
  add_out(eval);

  auto* pipeline = app.add_subcommand("pipeline", "Run synth/extract/fit/gen/eval from one config");
  add_config(pipeline);
  pipeline->add_option("--depth", o.depth, "Use this depth image instead of rendering");
  pipeline->add_option("--line", o.line, "Stroke line u,v_start,v_end");
  auto* pipeline_step = add_gen_opts(pipeline);
  auto* pipeline_seed = pipeline->add_option("--seed", o.seed, "Override the noise seed");
  add_out(pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "strokepath: " << message << '\n';
    return 2;
  }

  o.step_opt = pipeline->parsed() ? pipeline_step : gen_step;
  if (pipeline->parsed()) {
    o.seed_opt = pipeline_seed;
  }
  try {
    if (synth->parsed()) {
      cmd_synth(o, out);
    } else if (extract->parsed()) {
      cmd_extract(o, out);
    } else if (fit->parsed()) {
      cmd_fit(o, out);
    } else if (gen->parsed()) {
      cmd_gen(o, out);
    } else if (eval->parsed()) {
      cmd_eval(o, out);
    } else {
      cmd_pipeline(o, out);
    }
  } catch (const std::exception& e) {
    err << "strokepath: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace strokepath

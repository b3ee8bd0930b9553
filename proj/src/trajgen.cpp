#include "strokepath/trajgen.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "strokepath/config.hpp"
#include "strokepath/error.hpp"

namespace strokepath {

const char* to_string(Frame frame) noexcept { return frame == Frame::camera ? "camera" : "robot"; }

Frame frame_from_string(std::string_view name) {
  if (name == "camera") {
    return Frame::camera;
  }
  if (name == "robot") {
    return Frame::robot;
  }
  throw Error(ErrorCode::format, "unknown frame '" + std::string(name) + "'");
}

std::vector<Point3> generate_waypoints(const CubicCurve& curve, double x_fixed, double step) {
  validate(curve);
  if (!(std::isfinite(step) && step > 0.0)) {
    throw Error(ErrorCode::invalid_input, "step must be positive");
  }
  if (!std::isfinite(x_fixed)) {
    throw Error(ErrorCode::invalid_input, "non-finite x_fixed");
  }
  const double span = curve.y_max - curve.y_min;
  if (span < 2.0 * step) {
    throw Error(ErrorCode::domain_too_short, "curve domain is shorter than two steps");
  }

  // Grid points closer than this to y_max are snapped onto it.
  const double snap = step * 1e-6;
  const auto last = static_cast<long>(std::floor(span / step + 1e-9));
  std::vector<double> ys;
  ys.reserve(static_cast<std::size_t>(last) + 2);
  for (long i = 0; i <= last; ++i) {
    ys.push_back(curve.y_min + static_cast<double>(i) * step);
  }
  if (curve.y_max - ys.back() <= snap) {
    ys.back() = curve.y_max;
  } else {
    ys.push_back(curve.y_max);
  }

  std::vector<Point3> points;
  points.reserve(ys.size());
  for (const double y : ys) {
    points.emplace_back(x_fixed, y, eval_cubic(curve, y));
  }
  return points;
}

std::vector<double> compute_pitch(std::span<const Point3> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::invalid_input, "pitch needs at least two waypoints");
  }
  std::vector<double> pitch(points.size());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dy = points[i].y() - points[i - 1].y();
    if (!(dy > 0.0)) {
      throw Error(ErrorCode::ordering, "waypoint y must be strictly increasing (index " + std::to_string(i) + ")");
    }
    pitch[i] = std::atan((points[i].z() - points[i - 1].z()) / dy);
  }
  pitch[0] = pitch[1];
  return pitch;
}

Trajectory timestamp(Trajectory traj, double speed) {
  if (!(std::isfinite(speed) && speed > 0.0)) {
    throw Error(ErrorCode::invalid_input, "speed must be positive");
  }
  if (traj.waypoints.size() < 2) {
    throw Error(ErrorCode::degenerate_path, "trajectory needs at least two waypoints");
  }
  double length = 0.0;
  traj.waypoints.front().time = 0.0;
  for (std::size_t i = 1; i < traj.waypoints.size(); ++i) {
    const double segment = (traj.waypoints[i].position - traj.waypoints[i - 1].position).norm();
    if (!(segment > 0.0)) {
      throw Error(ErrorCode::degenerate_path, "zero-length segment at waypoint " + std::to_string(i));
    }
    length += segment;
    traj.waypoints[i].time = length / speed;
  }
  traj.speed = speed;
  return traj;
}

Trajectory build_trajectory(const CubicCurve& curve, double x_fixed, double step, double speed) {
  const auto points = generate_waypoints(curve, x_fixed, step);
  const auto pitch = compute_pitch(points);
  Trajectory traj;
  traj.frame = Frame::camera;
  traj.curve = curve;
  traj.waypoints.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    traj.waypoints.push_back({points[i], pitch[i], 0.0});
  }
  return timestamp(std::move(traj), speed);
}

double stroke_plane_rotation(const RigidTransform& camera_to_robot) {
  const Mat3& r = camera_to_robot.rotation();
  if ((r.col(0) - Vec3::UnitX()).cwiseAbs().maxCoeff() > 1e-6) {
    throw Error(ErrorCode::unsupported_transform,
                "rotation must map the camera x axis onto the robot x axis for single-pitch control");
  }
  return std::atan2(r(2, 1), r(1, 1));
}

Trajectory to_robot_frame(const Trajectory& traj, const RigidTransform& camera_to_robot) {
  if (traj.frame != Frame::camera) {
    throw Error(ErrorCode::invalid_input, "trajectory is not in the camera frame");
  }
  const double phi = stroke_plane_rotation(camera_to_robot);
  constexpr double pi = std::numbers::pi;
  Trajectory out = traj;
  out.frame = Frame::robot;
  for (auto& wp : out.waypoints) {
    wp.position = apply_transform(camera_to_robot, wp.position);
    // The pitch describes a tangent line, so it is only defined modulo pi.
    double pitch = wp.pitch + phi;
    pitch -= pi * std::round(pitch / pi);
    if (std::abs(pitch) >= 0.5 * pi - 1e-12) {
      throw Error(ErrorCode::unsupported_transform, "stroke tangent is vertical in the robot frame");
    }
    wp.pitch = pitch;
  }
  return out;
}

double path_length(const Trajectory& traj) {
  double length = 0.0;
  for (std::size_t i = 1; i < traj.waypoints.size(); ++i) {
    length += (traj.waypoints[i].position - traj.waypoints[i - 1].position).norm();
  }
  return length;
}

namespace {

constexpr std::string_view kTrajectoryHeader = "index,time_s,frame,x_m,y_m,z_m,pitch_rad";

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  using text::format_double;
  out << "# strokepath trajectory\n";
  out << "# speed_mps=" << format_double(traj.speed) << '\n';
  write_curve_fields(out, traj.curve, "# curve.");
  out << kTrajectoryHeader << '\n';
  const char* frame = to_string(traj.frame);
  for (std::size_t i = 0; i < traj.waypoints.size(); ++i) {
    const auto& wp = traj.waypoints[i];
    out << i << ',' << format_double(wp.time) << ',' << frame << ',' << format_double(wp.position.x()) << ','
        << format_double(wp.position.y()) << ',' << format_double(wp.position.z()) << ',' << format_double(wp.pitch)
        << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::io, "failed writing trajectory");
  }
}

Trajectory read_trajectory(std::istream& in) {
  std::ostringstream meta;
  std::string line;
  bool header = false;
  std::optional<Frame> frame;
  Trajectory traj;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) {
      continue;
    }
    if (body.front() == '#') {
      const auto kv = text::trim(body.substr(1));
      if (kv.find('=') != std::string_view::npos) {
        meta << kv << '\n';
      }
      continue;
    }
    if (!header) {
      if (body != kTrajectoryHeader) {
        throw Error(ErrorCode::format, "trajectory header must be '" + std::string(kTrajectoryHeader) + "'");
      }
      header = true;
      continue;
    }
    const auto fields = text::split(body, ',');
    if (fields.size() != 7) {
      throw Error(ErrorCode::format, "trajectory line " + std::to_string(line_no) + ": expected 7 fields");
    }
    const auto index = text::parse_int(fields[0]);
    if (!index || *index != static_cast<std::int64_t>(traj.waypoints.size())) {
      throw Error(ErrorCode::format, "trajectory line " + std::to_string(line_no) + ": bad index");
    }
    const Frame row_frame = frame_from_string(fields[2]);
    if (frame && *frame != row_frame) {
      throw Error(ErrorCode::format, "trajectory mixes frames");
    }
    frame = row_frame;
    Waypoint wp;
    double* targets[] = {&wp.time, &wp.position.x(), &wp.position.y(), &wp.position.z(), &wp.pitch};
    const std::size_t columns[] = {1, 3, 4, 5, 6};
    for (std::size_t j = 0; j < 5; ++j) {
      const auto value = text::parse_double(fields[columns[j]]);
      if (!value || !std::isfinite(*value)) {
        throw Error(ErrorCode::format, "trajectory line " + std::to_string(line_no) + ": bad number");
      }
      *targets[j] = *value;
    }
    traj.waypoints.push_back(wp);
  }
  if (!header || traj.waypoints.size() < 2) {
    throw Error(ErrorCode::format, "trajectory needs a header and at least two waypoints");
  }
  std::istringstream meta_in(meta.str());
  const auto cfg = KeyValueConfig::parse(meta_in, "trajectory metadata");
  traj.frame = *frame;
  traj.speed = cfg.get_double("speed_mps");
  traj.curve = curve_from_config(cfg, "curve.");
  return traj;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_trajectory(out, traj);
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return read_trajectory(in);
}

RigidTransform transform_from_config(const KeyValueConfig& cfg) {
  const auto rotation = cfg.get_doubles("rotation");
  const auto translation = cfg.get_doubles("translation");
  if (rotation.size() != 9 || translation.size() != 3) {
    throw Error(ErrorCode::config, cfg.source() + ": transform needs 9 rotation and 3 translation values");
  }
  Mat3 r;
  r << rotation[0], rotation[1], rotation[2], rotation[3], rotation[4], rotation[5], rotation[6], rotation[7],
      rotation[8];
  try {
    return RigidTransform::from_parts(r, Vec3(translation[0], translation[1], translation[2]));
  } catch (const Error& e) {
    throw Error(ErrorCode::config, cfg.source() + ": " + e.what());
  }
}

RigidTransform load_transform(const std::filesystem::path& path) { return transform_from_config(KeyValueConfig::load(path)); }

void write_transform(std::ostream& out, const RigidTransform& t) {
  const Mat3& r = t.rotation();
  out << "rotation =";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out << ' ' << text::format_double(r(i, j));
    }
  }
  out << "\ntranslation =";
  for (int i = 0; i < 3; ++i) {
    out << ' ' << text::format_double(t.translation()[i]);
  }
  out << '\n';
}

}  // namespace strokepath

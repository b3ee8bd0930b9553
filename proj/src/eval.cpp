#include "strokepath/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>

#include "strokepath/config.hpp"
#include "strokepath/error.hpp"

namespace strokepath {

void NormalTrace::validate() const {
  if (entries.empty()) {
    throw Error(ErrorCode::empty_input, "normal trace has no entries");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i].y)) {
      throw Error(ErrorCode::invalid_input, "non-finite trace y");
    }
    if (i > 0 && !(entries[i].y > entries[i - 1].y)) {
      throw Error(ErrorCode::ordering, "trace y must be increasing (entry " + std::to_string(i) + ")");
    }
  }
}

ErrorStats summarize_errors(std::vector<double> per_point_deg) {
  if (per_point_deg.empty()) {
    throw Error(ErrorCode::empty_input, "no error samples");
  }
  ErrorStats stats;
  stats.count = per_point_deg.size();
  double sum = 0.0;
  stats.max = per_point_deg.front();
  for (const double e : per_point_deg) {
    if (!(e >= 0.0 && e <= 180.0)) {
      throw Error(ErrorCode::invalid_input, "angular error outside [0, 180] degrees");
    }
    sum += e;
    stats.max = std::max(stats.max, e);
    if (e > 90.0) {
      ++stats.hemisphere_mismatches;
    }
  }
  // Rounding in the sum must not push the mean past the max.
  stats.mean = std::min(sum / static_cast<double>(stats.count), stats.max);
  stats.per_point = std::move(per_point_deg);
  return stats;
}

ErrorStats pool(std::span<const ErrorStats> parts) {
  std::vector<double> all;
  for (const auto& part : parts) {
    all.insert(all.end(), part.per_point.begin(), part.per_point.end());
  }
  return summarize_errors(std::move(all));
}

UnitVec3 surface_normal(const CubicCurve& curve, double y) {
  return UnitVec3::normalized(Vec3(0.0, -derivative(curve, y), 1.0));
}

UnitVec3 surface_normal(const SyntheticScene& scene, double x, double y) { return scene.surface.normal(x, y); }

UnitVec3 effector_normal(double pitch) {
  return UnitVec3::normalized(Vec3(0.0, -std::sin(pitch), std::cos(pitch)));
}

namespace {

// Reference normal at camera-frame (x, y), with a domain check.
UnitVec3 reference_normal(const Reference& reference, double x, double y) {
  if (const auto* curve = std::get_if<CubicCurve>(&reference)) {
    constexpr double tol = 1e-9;
    if (y < curve->y_min - tol || y > curve->y_max + tol) {
      throw Error(ErrorCode::coverage, "waypoint y=" + text::format_double(y) + " outside the reference domain [" +
                                           text::format_double(curve->y_min) + ", " +
                                           text::format_double(curve->y_max) + "]");
    }
    return surface_normal(*curve, y);
  }
  const auto& scene = std::get<SyntheticScene>(reference);
  if (!(scene.surface.depth(x, y) > 0.0)) {
    throw Error(ErrorCode::coverage, "reference surface is behind the camera at y=" + text::format_double(y));
  }
  return surface_normal(scene, x, y);
}

}  // namespace

NormalTrace normal_trace(const Trajectory& traj, const Reference& reference) {
  if (traj.frame != Frame::camera) {
    throw Error(ErrorCode::invalid_input, "expected a camera-frame trajectory");
  }
  NormalTrace trace;
  trace.entries.reserve(traj.waypoints.size());
  for (const auto& wp : traj.waypoints) {
    trace.entries.push_back(
        {wp.position.y(), reference_normal(reference, wp.position.x(), wp.position.y()), effector_normal(wp.pitch)});
  }
  return trace;
}

NormalTrace normal_trace(const Trajectory& robot_traj, const Reference& reference,
                         const RigidTransform& camera_to_robot) {
  if (robot_traj.frame != Frame::robot) {
    throw Error(ErrorCode::invalid_input, "expected a robot-frame trajectory");
  }
  stroke_plane_rotation(camera_to_robot);
  const RigidTransform robot_to_camera = camera_to_robot.inverse();
  // Camera +z seen from the robot; effector normals are oriented to match.
  const Vec3 facing = camera_to_robot.rotation().col(2);
  NormalTrace trace;
  trace.entries.reserve(robot_traj.waypoints.size());
  for (const auto& wp : robot_traj.waypoints) {
    const Point3 p = apply_transform(robot_to_camera, wp.position);
    const UnitVec3 surface = rotate_direction(camera_to_robot, reference_normal(reference, p.x(), p.y()));
    UnitVec3 effector = effector_normal(wp.pitch);
    if (effector.vector().dot(facing) < 0.0) {
      effector = -effector;
    }
    trace.entries.push_back({p.y(), surface, effector});
  }
  return trace;
}

NormalTrace transform_trace(const NormalTrace& trace, const RigidTransform& t) {
  NormalTrace out;
  out.entries.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    out.entries.push_back({e.y, rotate_direction(t, e.surface), rotate_direction(t, e.effector)});
  }
  return out;
}

ErrorStats evaluate_trace(const NormalTrace& trace) {
  trace.validate();
  std::vector<double> errors;
  errors.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    errors.push_back(angle_between(e.surface, e.effector));
  }
  return summarize_errors(std::move(errors));
}

ErrorStats evaluate_trajectory(const Trajectory& traj, const Reference& reference) {
  return evaluate_trace(normal_trace(traj, reference));
}

ErrorStats evaluate_trajectory(const Trajectory& robot_traj, const Reference& reference,
                               const RigidTransform& camera_to_robot) {
  return evaluate_trace(normal_trace(robot_traj, reference, camera_to_robot));
}

std::pair<ErrorStats, ErrorStats> compare_traces(const NormalTrace& a, const NormalTrace& b) {
  return {evaluate_trace(a), evaluate_trace(b)};
}

namespace {

constexpr std::string_view kTraceHeader = "y_m,Bx,By,Bz,Ex,Ey,Ez";

// Accepts hand-written files with a few digits per component; exact unit
// vectors pass through unchanged.
UnitVec3 read_direction(double x, double y, double z, int line_no) {
  const Vec3 v(x, y, z);
  if (std::abs(v.norm() - 1.0) <= kUnitTolerance) {
    return UnitVec3::from_unit(v);
  }
  if (std::abs(v.norm() - 1.0) <= 1e-3) {
    return UnitVec3::normalized(v);
  }
  throw Error(ErrorCode::format, "trace line " + std::to_string(line_no) + ": normal is not unit length");
}

}  // namespace

void write_trace(std::ostream& out, const NormalTrace& trace) {
  using text::format_double;
  out << kTraceHeader << '\n';
  for (const auto& e : trace.entries) {
    out << format_double(e.y);
    for (const auto* n : {&e.surface, &e.effector}) {
      out << ',' << format_double(n->x()) << ',' << format_double(n->y()) << ',' << format_double(n->z());
    }
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::io, "failed writing trace");
  }
}

NormalTrace read_trace(std::istream& in) {
  NormalTrace trace;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') {
      continue;
    }
    if (!header) {
      if (body != kTraceHeader) {
        throw Error(ErrorCode::format, "trace header must be '" + std::string(kTraceHeader) + "'");
      }
      header = true;
      continue;
    }
    const auto fields = text::split(body, ',');
    if (fields.size() != 7) {
      throw Error(ErrorCode::format, "trace line " + std::to_string(line_no) + ": expected 7 fields");
    }
    double v[7];
    for (std::size_t i = 0; i < 7; ++i) {
      const auto value = text::parse_double(fields[i]);
      if (!value || !std::isfinite(*value)) {
        throw Error(ErrorCode::format, "trace line " + std::to_string(line_no) + ": bad number");
      }
      v[i] = *value;
    }
    trace.entries.push_back({v[0], read_direction(v[1], v[2], v[3], line_no), read_direction(v[4], v[5], v[6], line_no)});
  }
  if (!header) {
    throw Error(ErrorCode::format, "trace is missing its header");
  }
  return trace;
}

void save_trace(const NormalTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_trace(out, trace);
}

NormalTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return read_trace(in);
}

namespace {

constexpr std::string_view kReportFormat = "strokepath-report/1";

struct ReferenceLine {
  const char* key;
  double value;
};

constexpr ReferenceLine kReferenceLines[] = {
    {"reference.robot_mean_deg", reference_values::kRobotMeanDeg},
    {"reference.robot_max_deg", reference_values::kRobotMaxDeg},
    {"reference.human1_mean_deg", reference_values::kHuman1MeanDeg},
    {"reference.human1_max_deg", reference_values::kHuman1MaxDeg},
    {"reference.human2_mean_deg", reference_values::kHuman2MeanDeg},
    {"reference.human2_max_deg", reference_values::kHuman2MaxDeg},
};

void check_report_text(const std::string& s, bool is_key) {
  if (s.find_first_of("\r\n") != std::string::npos || (is_key && (s.empty() || s.find('=') != std::string::npos))) {
    throw Error(ErrorCode::invalid_input, "report context entry '" + s + "' cannot be written as key=value");
  }
}

}  // namespace

void write_report(std::ostream& out, const ErrorStats& stats, const ReportContext& context) {
  using text::format_double;
  if (stats.count != stats.per_point.size() || stats.count == 0) {
    throw Error(ErrorCode::invalid_input, "report stats are inconsistent");
  }
  out << "# strokepath normal-mismatch report (angles in degrees)\n";
  out << "format=" << kReportFormat << '\n';
  out << "count=" << stats.count << '\n';
  out << "mean_deg=" << format_double(stats.mean) << '\n';
  out << "max_deg=" << format_double(stats.max) << '\n';
  out << "hemisphere_mismatches=" << stats.hemisphere_mismatches << '\n';
  out << "per_point_deg=";
  for (std::size_t i = 0; i < stats.per_point.size(); ++i) {
    out << (i ? "," : "") << format_double(stats.per_point[i]);
  }
  out << '\n';
  for (const auto& [key, value] : context) {
    check_report_text(key, true);
    check_report_text(value, false);
    out << "context." << key << '=' << value << '\n';
  }
  for (const auto& ref : kReferenceLines) {
    out << ref.key << '=' << format_double(ref.value) << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::io, "failed writing report");
  }
}

Report read_report(std::istream& in) {
  Report report;
  std::optional<std::string> format;
  std::optional<std::int64_t> count;
  std::optional<std::int64_t> mismatches;
  std::optional<double> mean;
  std::optional<double> max;
  bool have_series = false;
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string& what) {
    return Error(ErrorCode::format, "report line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw fail("expected key=value");
    }
    const auto key = body.substr(0, eq);
    const auto value = body.substr(eq + 1);
    if (key == "format") {
      format = std::string(value);
    } else if (key == "count") {
      count = text::parse_int(value);
      if (!count) throw fail("bad count");
    } else if (key == "hemisphere_mismatches") {
      mismatches = text::parse_int(value);
      if (!mismatches) throw fail("bad hemisphere_mismatches");
    } else if (key == "mean_deg") {
      mean = text::parse_double(value);
      if (!mean) throw fail("bad mean_deg");
    } else if (key == "max_deg") {
      max = text::parse_double(value);
      if (!max) throw fail("bad max_deg");
    } else if (key == "per_point_deg") {
      for (const auto field : text::split_list(value)) {
        const auto v = text::parse_double(field);
        if (!v) throw fail("bad per_point_deg entry");
        report.stats.per_point.push_back(*v);
      }
      have_series = true;
    } else if (key.starts_with("context.")) {
      report.context.emplace_back(std::string(key.substr(8)), std::string(value));
    } else if (key.starts_with("reference.")) {
      // Constants; regenerated on write.
    } else {
      throw fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (format != kReportFormat) {
    throw Error(ErrorCode::format, "not a strokepath report");
  }
  if (!count || !mean || !max || !mismatches || !have_series) {
    throw Error(ErrorCode::format, "report is missing a statistics field");
  }
  if (*count < 0 || static_cast<std::size_t>(*count) != report.stats.per_point.size()) {
    throw Error(ErrorCode::format, "report count does not match per_point_deg");
  }
  report.stats.count = static_cast<std::size_t>(*count);
  report.stats.mean = *mean;
  report.stats.max = *max;
  report.stats.hemisphere_mismatches = static_cast<std::size_t>(*mismatches);
  return report;
}

void save_report(const std::filesystem::path& path, const ErrorStats& stats, const ReportContext& context) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_report(out, stats, context);
}

Report load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return read_report(in);
}

}  // namespace strokepath

// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strokepath/curvefit.hpp"
#include "strokepath/depthcam.hpp"
#include "strokepath/eval.hpp"
#include "strokepath/pipeline.hpp"
#include "strokepath/profile.hpp"
#include "strokepath/trajgen.hpp"

using namespace strokepath;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SyntheticScene back_scene(double sigma_mm, std::uint64_t seed) {
  SyntheticScene scene;
  scene.surface = {2.0, 0.2, 0.15, 0.5, 0.0};
  scene.noise_sigma_mm = sigma_mm;
  scene.seed = seed;
  return scene;
}

Outcome cubic_fit_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::normal_distribution<double> noise(0.0, 2e-3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto truth = oracle::random_back_curve(rng);
    const auto y = linspace(truth.y_min, truth.y_max, 200);
    std::vector<double> z;
    for (double v : y) z.push_back(oracle::eval_expanded(truth.a, truth.b, truth.c, truth.d, v) + noise(rng));
    const auto fit = fit_cubic(as_vector(y), as_vector(z));
    const auto ref = oracle::normal_equations_cubic(y, z);
    for (double v : linspace(fit.y_min, fit.y_max, 1001)) {
      worst = std::max(worst, std::abs(eval_cubic(fit, v) - static_cast<double>(oracle::eval_quad(ref, v))));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 5.0, fmt("max deviation %.3g m, %.2f s", worst, secs)};
}

Outcome generation_self_consistency() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2002);
  std::normal_distribution<double> noise(0.0, 5e-4);
  const double h = 0.001;
  double worst = 0.0;
  double worst_bound_excess = -1.0;
  double worst_disagreement = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto truth = oracle::random_back_curve(rng);
    const auto y = linspace(truth.y_min, truth.y_max, 200);
    std::vector<double> z;
    for (double v : y) z.push_back(oracle::eval_expanded(truth.a, truth.b, truth.c, truth.d, v) + noise(rng));
    const auto curve = fit_cubic(as_vector(y), as_vector(z));
    const auto traj = build_trajectory(curve, 0.0, h);
    const auto stats = evaluate_trajectory(traj, curve);
    const double max_curv = std::max(std::abs(6 * curve.a * curve.y_min + 2 * curve.b),
                                     std::abs(6 * curve.a * curve.y_max + 2 * curve.b));
    for (std::size_t i = 0; i < traj.waypoints.size(); ++i) {
      // Analytic tangent angle from the derivative, independent of the library.
      const double yi = traj.waypoints[i].position.y();
      const Vec3 b = Vec3(0.0, -(3 * curve.a * yi * yi + 2 * curve.b * yi + curve.c), 1.0).normalized();
      const double p = traj.waypoints[i].pitch;
      const double err = oracle::acos_angle_deg(b, Vec3(0.0, -std::sin(p), std::cos(p)));
      const double bound = (i == 0 ? 1.5 : 0.5) * h * max_curv * 180.0 / 3.141592653589793 + 1e-5;
      worst_bound_excess = std::max(worst_bound_excess, err - bound);
      worst_disagreement = std::max(worst_disagreement, std::abs(err - stats.per_point[i]));
      worst = std::max(worst, stats.per_point[i]);
    }
  }
  const double secs = seconds_since(t0);
  // arccos of a near-unit dot product is only good to about 1e-6 deg.
  const bool agrees = worst_disagreement <= 1e-5;
  return {worst <= 0.05 && worst_bound_excess <= 0.0 && agrees && secs < 1.0,
          fmt("max error %.4f deg, per-point bound slack %.3g deg, %.2f s", worst, -worst_bound_excess, secs)};
}

Outcome zero_noise_pipeline() {
  const auto t0 = Clock::now();
  PipelineConfig cfg;
  cfg.scene = back_scene(0.0, 1);
  cfg.line = default_stroke_line(cfg.scene);
  const auto r = run_pipeline(cfg);
  const auto& s = cfg.scene.surface;
  const double rel = std::max({std::abs(r.curve.a - s.a) / std::abs(s.a), std::abs(r.curve.b - s.b) / std::abs(s.b),
                               std::abs(r.curve.c - s.c) / std::abs(s.c), std::abs(r.curve.d - s.d) / std::abs(s.d)});
  const double secs = seconds_since(t0);
  return {r.stats.mean <= 0.05 && rel <= 1e-4 && secs < 5.0,
          fmt("mean %.4f deg, max coefficient rel. error %.3g, %.2f s", r.stats.mean, rel, secs)};
}

Outcome noise_robustness() {
  double worst = 0.0;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto scene = back_scene(2.0, seed);
    scene.surface.lateral = 0.5;
    // Through the 1 mm quantized image, as a file-based run would see it.
    const auto img = quantize(render_synthetic(scene));
    const auto profile = extract_profile(img, default_stroke_line(scene), scene.intrinsics);
    const auto curve = fit_cubic(profile);
    const auto traj = build_trajectory(curve, profile.x_fixed);
    const auto stats = evaluate_trajectory(traj, scene);
    worst = std::max(worst, stats.mean);
    total += stats.mean;
  }
  return {worst <= 6.0, fmt("worst run mean %.3f deg, average %.3f deg over 20 seeds", worst, total / 20.0)};
}

Outcome angle_metric() {
  std::mt19937_64 rng(5005);
  double worst_oracle = 0.0;
  bool symmetric = true;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 va = oracle::random_unit(rng);
    const Vec3 vb = oracle::random_unit(rng);
    const auto a = UnitVec3::from_unit(va);
    const auto b = UnitVec3::from_unit(vb);
    const double ab = angle_between(a, b);
    symmetric = symmetric && ab == angle_between(b, a);
    worst_oracle = std::max(worst_oracle, std::abs(ab - oracle::acos_angle_deg(va, vb)));
  }
  double worst_rot = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto t = oracle::random_rigid(rng);
    const auto a = UnitVec3::from_unit(oracle::random_unit(rng));
    const auto b = UnitVec3::from_unit(oracle::random_unit(rng));
    worst_rot = std::max(worst_rot, std::abs(angle_between(rotate_direction(t, a), rotate_direction(t, b)) -
                                             angle_between(a, b)));
  }
  return {worst_oracle <= 1e-9 && symmetric && worst_rot <= 1e-9,
          fmt("arccos deviation %.3g deg, rotation deviation %.3g deg, symmetric %g", worst_oracle, worst_rot,
              symmetric ? 1.0 : 0.0)};
}

Outcome timing_contract() {
  const auto straight = flat_curve(0.5, -0.1, 0.1);
  double worst = 0.0;
  double medium_final = 0.0;
  for (double speed : {kSlowSpeed, kMediumSpeed}) {
    const auto traj = build_trajectory(straight, 0.0, 0.001, speed);
    for (const auto& wp : traj.waypoints) {
      worst = std::max(worst, std::abs(wp.time - (wp.position.y() - straight.y_min) / speed));
    }
    worst = std::max(worst, std::abs(traj.waypoints.back().time - 0.2 / speed));
    if (speed == kMediumSpeed) medium_final = traj.waypoints.back().time;
  }
  return {worst <= 1e-9 && std::abs(medium_final - 2.3529) < 5e-5,
          fmt("max timestamp deviation %.3g s, medium-speed duration %.6f s", worst, medium_final)};
}

Outcome frame_invariance() {
  std::mt19937_64 rng(7007);
  const CubicCurve curve{2.0, -1.0, 0.3, 0.45, 0.05, 0.25, 0.0};
  const auto traj = build_trajectory(curve, 0.01);
  const auto trace = normal_trace(traj, curve);
  const auto base = evaluate_trace(trace);
  double worst = 0.0;
  const auto compare = [&](const ErrorStats& s) {
    worst = std::max({worst, std::abs(s.mean - base.mean), std::abs(s.max - base.max)});
    for (std::size_t i = 0; i < s.per_point.size(); ++i) {
      worst = std::max(worst, std::abs(s.per_point[i] - base.per_point[i]));
    }
  };
  for (int i = 0; i < 100; ++i) {
    compare(evaluate_trace(transform_trace(trace, oracle::random_rigid(rng))));
    const auto t = oracle::random_stroke_plane_rigid(rng);
    compare(evaluate_trajectory(to_robot_frame(traj, t), curve, t));
  }
  return {worst <= 1e-9, fmt("max statistic change %.3g deg over 200 transforms", worst)};
}

template <typename T, typename Write, typename Read>
bool round_trips(const T& value, Write write, Read read) {
  std::stringstream buf;
  write(buf, value);
  const std::string first = buf.str();
  const T back = read(buf);
  std::stringstream again;
  write(again, back);
  return back == value && again.str() == first;
}

Outcome file_round_trips() {
  const fs::path data = STROKEPATH_DATA_DIR;
  int failures = 0;
  const auto check = [&](bool ok) { failures += ok ? 0 : 1; };

  const auto depth = quantize(render_synthetic(back_scene(2.0, 3)));
  check(round_trips(depth, [](std::ostream& o, const DepthImage& d) { write_depth_image(o, d); },
                    [](std::istream& i) { return read_depth_image(i); }));

  const auto traj = build_trajectory({2.0, -1.0, 0.3, 0.45, 0.05, 0.25, 1e-4}, 0.0123, 0.001, kSlowSpeed);
  const auto write_traj = [](std::ostream& o, const Trajectory& t) { write_trajectory(o, t); };
  const auto read_traj = [](std::istream& i) { return read_trajectory(i); };
  check(round_trips(traj, write_traj, read_traj));
  check(round_trips(to_robot_frame(traj, load_transform(data / "transform_example.cfg")), write_traj, read_traj));

  const auto write_tr = [](std::ostream& o, const NormalTrace& t) { write_trace(o, t); };
  const auto read_tr = [](std::istream& i) { return read_trace(i); };
  check(round_trips(normal_trace(traj, traj.curve), write_tr, read_tr));
  check(round_trips(load_trace(data / "trace_offset5.csv"), write_tr, read_tr));

  const Report report{summarize_errors({0.1, 1.0 / 3.0, 5.97}), {{"source", "acceptance"}, {"speed_mps", "0.028"}}};
  check(round_trips(report, [](std::ostream& o, const Report& r) { write_report(o, r.stats, r.context); },
                    [](std::istream& i) { return read_report(i); }));

  const auto curve = load_curve(data / "curve_straight_020.txt");
  check(round_trips(curve, [](std::ostream& o, const CurveRecord& c) { write_curve(o, c); },
                    [](std::istream& i) { return read_curve(i); }));

  return {failures == 0, fmt("%g of 7 fixtures failed to round-trip", failures)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"cubic fit matches extended-precision oracle", cubic_fit_oracle},
      {"generation + evaluation self-consistency", generation_self_consistency},
      {"zero-noise end-to-end pipeline", zero_noise_pipeline},
      {"noise robustness over 20 seeds", noise_robustness},
      {"angle metric vs arccos, symmetry, rotation invariance", angle_metric},
      {"timing contract", timing_contract},
      {"frame-transform invariance", frame_invariance},
      {"file-format round trips", file_round_trips},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}

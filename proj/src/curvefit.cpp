#include "strokepath/curvefit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "strokepath/config.hpp"
#include "strokepath/error.hpp"

namespace strokepath {

void validate(const CubicCurve& curve) {
  if (!(std::isfinite(curve.a) && std::isfinite(curve.b) && std::isfinite(curve.c) && std::isfinite(curve.d) &&
        std::isfinite(curve.y_min) && std::isfinite(curve.y_max) && std::isfinite(curve.rms_residual))) {
    throw Error(ErrorCode::invalid_input, "non-finite curve field");
  }
  if (!(curve.y_min < curve.y_max)) {
    throw Error(ErrorCode::invalid_input, "curve domain needs y_min < y_max");
  }
  if (curve.rms_residual < 0.0) {
    throw Error(ErrorCode::invalid_input, "negative rms residual");
  }
}

CubicCurve fit_cubic(const BackProfile& profile) {
  profile.validate();
  return fit_cubic(profile.y, profile.z);
}

CubicCurve fit_cubic(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (y.size() != z.size()) {
    throw Error(ErrorCode::invalid_input, "y and z lengths differ");
  }
  if (!y.allFinite() || !z.allFinite()) {
    throw Error(ErrorCode::invalid_input, "non-finite sample");
  }
  std::vector<double> distinct(y.data(), y.data() + y.size());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) {
    throw Error(ErrorCode::singular_fit, "cubic fit needs at least 4 distinct y values");
  }

  const double y_min = distinct.front();
  const double y_max = distinct.back();
  const double center = 0.5 * (y_min + y_max);
  const double half = 0.5 * (y_max - y_min);

  // Columns 1, t, t^2, t^3 with t in [-1, 1].
  const Eigen::ArrayXd t = (y.array() - center) / half;
  Eigen::MatrixXd design(y.size(), 4);
  design.col(0).setOnes();
  design.col(1) = t.matrix();
  design.col(2) = (t * t).matrix();
  design.col(3) = (t * t * t).matrix();

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 4) {
    throw Error(ErrorCode::singular_fit, "rank-deficient cubic design");
  }
  const Eigen::Vector4d p = qr.solve(z);

  // t = alpha y + beta; expand p0 + p1 t + p2 t^2 + p3 t^3 in powers of y.
  const double alpha = 1.0 / half;
  const double beta = -center / half;
  CubicCurve curve;
  curve.a = p[3] * alpha * alpha * alpha;
  curve.b = (p[2] + 3.0 * p[3] * beta) * alpha * alpha;
  curve.c = (p[1] + 2.0 * p[2] * beta + 3.0 * p[3] * beta * beta) * alpha;
  curve.d = p[0] + beta * (p[1] + beta * (p[2] + beta * p[3]));
  curve.y_min = y_min;
  curve.y_max = y_max;

  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = z[i] - eval_cubic(curve, y[i]);
    sum_sq += r * r;
  }
  curve.rms_residual = std::sqrt(sum_sq / static_cast<double>(y.size()));
  validate(curve);
  return curve;
}

void write_curve_fields(std::ostream& out, const CubicCurve& curve, const std::string& prefix) {
  out << prefix << "a=" << text::format_double(curve.a) << '\n'
      << prefix << "b=" << text::format_double(curve.b) << '\n'
      << prefix << "c=" << text::format_double(curve.c) << '\n'
      << prefix << "d=" << text::format_double(curve.d) << '\n'
      << prefix << "y_min=" << text::format_double(curve.y_min) << '\n'
      << prefix << "y_max=" << text::format_double(curve.y_max) << '\n'
      << prefix << "rms_residual=" << text::format_double(curve.rms_residual) << '\n';
}

CubicCurve curve_from_config(const KeyValueConfig& cfg, const std::string& prefix) {
  CubicCurve curve;
  curve.a = cfg.get_double(prefix + "a");
  curve.b = cfg.get_double(prefix + "b");
  curve.c = cfg.get_double(prefix + "c");
  curve.d = cfg.get_double(prefix + "d");
  curve.y_min = cfg.get_double(prefix + "y_min");
  curve.y_max = cfg.get_double(prefix + "y_max");
  curve.rms_residual = cfg.get_double_or(prefix + "rms_residual", 0.0);
  validate(curve);
  return curve;
}

void write_curve(std::ostream& out, const CurveRecord& record) {
  validate(record.curve);
  out << "# cubic z = a*y^3 + b*y^2 + c*y + d (camera frame, meters)\n";
  write_curve_fields(out, record.curve, "");
  out << "x_fixed=" << text::format_double(record.x_fixed) << '\n';
  if (!out) {
    throw Error(ErrorCode::io, "failed writing curve");
  }
}

CurveRecord read_curve(std::istream& in) {
  const auto cfg = KeyValueConfig::parse(in, "curve");
  CurveRecord record;
  record.curve = curve_from_config(cfg);
  record.x_fixed = cfg.get_double_or("x_fixed", 0.0);
  return record;
}

void save_curve(const CurveRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  write_curve(out, record);
}

CurveRecord load_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  const auto cfg = KeyValueConfig::parse(in, path.string());
  CurveRecord record;
  record.curve = curve_from_config(cfg);
  record.x_fixed = cfg.get_double_or("x_fixed", 0.0);
  return record;
}

}  // namespace strokepath

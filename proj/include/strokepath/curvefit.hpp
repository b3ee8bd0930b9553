/**
 * @file curvefit.hpp
 * @brief Cubic back-shape model z = a y^3 + b y^2 + c y + d.
 *
 * fit_cubic solves the linear least-squares problem on y mapped to [-1, 1]
 * with a Householder QR, then maps the coefficients back to the raw y basis.
 */

#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

#include "strokepath/profile.hpp"

namespace strokepath {

template <typename Scalar>
struct CubicCurveT {
  Scalar a{};
  Scalar b{};
  Scalar c{};
  Scalar d{};
  Scalar y_min{};  ///< fit domain, meters
  Scalar y_max{};
  Scalar rms_residual{};  ///< meters, over the fitted samples

  friend bool operator==(const CubicCurveT&, const CubicCurveT&) = default;
};

using CubicCurve = CubicCurveT<double>;

template <typename Scalar>
Scalar eval_cubic(const CubicCurveT<Scalar>& curve, Scalar y) {
  return ((curve.a * y + curve.b) * y + curve.c) * y + curve.d;
}

/// dz/dy = 3 a y^2 + 2 b y + c
template <typename Scalar>
Scalar derivative(const CubicCurveT<Scalar>& curve, Scalar y) {
  return (Scalar(3) * curve.a * y + Scalar(2) * curve.b) * y + curve.c;
}

template <typename Scalar>
Scalar second_derivative(const CubicCurveT<Scalar>& curve, Scalar y) {
  return Scalar(6) * curve.a * y + Scalar(2) * curve.b;
}

/// A constant-depth curve over [y_min, y_max].
inline CubicCurve flat_curve(double depth, double y_min, double y_max) { return {0.0, 0.0, 0.0, depth, y_min, y_max, 0.0}; }

/// Throws invalid_input unless coefficients are finite, y_min < y_max and
/// rms_residual >= 0.
void validate(const CubicCurve& curve);

CubicCurve fit_cubic(const BackProfile& profile);
/// Least-squares cubic through (y, z); needs at least 4 distinct y.
CubicCurve fit_cubic(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& z);

/// Curve plus the lateral position of the stroke it was fitted on.
struct CurveRecord {
  CubicCurve curve;
  double x_fixed = 0.0;

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

/// Key-value record: a, b, c, d, y_min, y_max, rms_residual, x_fixed.
/// `prefix` is prepended to every key (e.g. "# curve.").
void write_curve_fields(std::ostream& out, const CubicCurve& curve, const std::string& prefix);
CubicCurve curve_from_config(const KeyValueConfig& cfg, const std::string& prefix = "");

void write_curve(std::ostream& out, const CurveRecord& record);
CurveRecord read_curve(std::istream& in);
void save_curve(const CurveRecord& record, const std::filesystem::path& path);
CurveRecord load_curve(const std::filesystem::path& path);

}  // namespace strokepath

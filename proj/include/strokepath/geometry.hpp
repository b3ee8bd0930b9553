/**
 * @file geometry.hpp
 * @brief 3D points, unit directions, rigid transforms and the normal
 *        mismatch angle.
 *
 * Everything here is templated on the scalar type and header-only. The
 * `double` aliases (Point3, UnitVec3, RigidTransform) are what the rest of
 * the library uses.
 *
 * Units: meters for positions, radians internally, degrees for reported
 * angles.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <string>

#include "strokepath/error.hpp"

namespace strokepath {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

/// Position in a stated frame. Camera frame: x = image-horizontal,
/// y = image-vertical, z = depth along the optical axis.
template <typename Scalar>
using Point3T = Vec3T<Scalar>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using Point3 = Point3T<double>;

/// Tolerance for unit-norm and orthonormality checks.
inline constexpr double kUnitTolerance = 1e-9;

template <typename Scalar>
constexpr Scalar to_degrees(Scalar radians) {
  return radians * (Scalar(180) / std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
constexpr Scalar to_radians(Scalar degrees) {
  return degrees * (std::numbers::pi_v<Scalar> / Scalar(180));
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Direction with Euclidean norm 1 (within 1e-9).
template <typename Scalar>
class UnitVec3T {
 public:
  using Vector = Vec3T<Scalar>;

  /// +z, the camera-facing convention used for normals.
  UnitVec3T() : v_(Vector::UnitZ()) {}

  /// Scales v to unit length. Throws on zero or non-finite input.
  static UnitVec3T normalized(const Vector& v) {
    if (!v.allFinite()) {
      throw Error(ErrorCode::invalid_input, "non-finite direction");
    }
    const Scalar n = v.norm();
    if (!(n > Scalar(0))) {
      throw Error(ErrorCode::invalid_input, "zero-length direction");
    }
    return UnitVec3T(v / n);
  }

  /// Wraps v unchanged; v must already be unit length within 1e-9.
  static UnitVec3T from_unit(const Vector& v) {
    if (!v.allFinite()) {
      throw Error(ErrorCode::invalid_input, "non-finite direction");
    }
    using std::abs;
    if (abs(v.norm() - Scalar(1)) > Scalar(kUnitTolerance)) {
      throw Error(ErrorCode::invalid_input, "direction is not unit length");
    }
    return UnitVec3T(v);
  }

  static UnitVec3T from_unit(Scalar x, Scalar y, Scalar z) { return from_unit(Vector(x, y, z)); }

  const Vector& vector() const noexcept { return v_; }
  Scalar x() const noexcept { return v_.x(); }
  Scalar y() const noexcept { return v_.y(); }
  Scalar z() const noexcept { return v_.z(); }

  UnitVec3T operator-() const { return UnitVec3T(-v_); }

  friend bool operator==(const UnitVec3T& a, const UnitVec3T& b) { return a.v_ == b.v_; }

 private:
  explicit UnitVec3T(const Vector& v) : v_(v) {}

  Vector v_;
};

using UnitVec3 = UnitVec3T<double>;

/// p -> R p + t with R a proper rotation (orthonormal, det +1 within 1e-9).
template <typename Scalar>
class RigidTransformT {
 public:
  using Matrix = Mat3T<Scalar>;
  using Vector = Vec3T<Scalar>;

  RigidTransformT() : rotation_(Matrix::Identity()), translation_(Vector::Zero()) {}

  static RigidTransformT identity() { return RigidTransformT(); }

  static RigidTransformT from_parts(const Matrix& rotation, const Vector& translation) {
    if (!rotation.allFinite() || !translation.allFinite()) {
      throw Error(ErrorCode::invalid_input, "non-finite transform");
    }
    using std::abs;
    const Scalar ortho = (rotation.transpose() * rotation - Matrix::Identity()).cwiseAbs().maxCoeff();
    if (ortho > Scalar(kUnitTolerance)) {
      throw Error(ErrorCode::invalid_input, "rotation is not orthonormal");
    }
    if (abs(rotation.determinant() - Scalar(1)) > Scalar(kUnitTolerance)) {
      throw Error(ErrorCode::invalid_input, "rotation determinant is not +1");
    }
    RigidTransformT t;
    t.rotation_ = rotation;
    t.translation_ = translation;
    return t;
  }

  static RigidTransformT rotation_only(const Matrix& rotation) { return from_parts(rotation, Vector::Zero()); }

  static RigidTransformT translation_only(const Vector& translation) {
    return from_parts(Matrix::Identity(), translation);
  }

  const Matrix& rotation() const noexcept { return rotation_; }
  const Vector& translation() const noexcept { return translation_; }

  RigidTransformT inverse() const {
    RigidTransformT t;
    t.rotation_ = rotation_.transpose();
    t.translation_ = -(t.rotation_ * translation_);
    return t;
  }

  /// (a * b)(p) = a(b(p))
  friend RigidTransformT operator*(const RigidTransformT& a, const RigidTransformT& b) {
    RigidTransformT t;
    t.rotation_ = a.rotation_ * b.rotation_;
    t.translation_ = a.rotation_ * b.translation_ + a.translation_;
    return t;
  }

 private:
  Matrix rotation_;
  Vector translation_;
};

using RigidTransform = RigidTransformT<double>;

template <typename Scalar>
Point3T<Scalar> apply_transform(const RigidTransformT<Scalar>& t, const Point3T<Scalar>& p) {
  if (!p.allFinite()) {
    throw Error(ErrorCode::invalid_input, "non-finite point");
  }
  return t.rotation() * p + t.translation();
}

/// Rotation part only; translation does not act on directions.
template <typename Scalar>
UnitVec3T<Scalar> rotate_direction(const RigidTransformT<Scalar>& t, const UnitVec3T<Scalar>& v) {
  return UnitVec3T<Scalar>::normalized(t.rotation() * v.vector());
}

/// Unsigned angle between two directions in degrees, in [0, 180].
///
/// Evaluated as atan2(|a x b|, a . b), which agrees with arccos of the
/// clamped dot product but keeps full precision for nearly parallel and
/// nearly opposite directions.
template <typename Scalar>
Scalar angle_between(const UnitVec3T<Scalar>& a, const UnitVec3T<Scalar>& b) {
  if (!a.vector().allFinite() || !b.vector().allFinite()) {
    throw Error(ErrorCode::invalid_input, "non-finite direction");
  }
  using std::atan2;
  const Scalar sine = a.vector().cross(b.vector()).norm();
  const Scalar cosine = a.vector().dot(b.vector());
  return to_degrees(atan2(sine, cosine));
}

/// Rotation by `angle` radians about the x axis.
template <typename Scalar>
Mat3T<Scalar> rotation_about_x(Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, Vec3T<Scalar>::UnitX()).toRotationMatrix();
}

}  // namespace strokepath

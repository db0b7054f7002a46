#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

// Exact SU(2) rotation algebra on unit quaternions. Angles live on the double
// cover [0, 2pi], so a 2pi rotation (-1,0,0,0) is distinct from the identity.
// Convention: right-handed active rotations; compose(a, b) applies a first.

namespace ddsim {

template <typename Scalar>
using Rotation = Eigen::Quaternion<Scalar>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Rotationd = Rotation<double>;
using BlochVector = Vec3<double>;

template <typename Scalar>
struct AngleAxis {
  Scalar angle{0};            // radians in [0, 2pi]
  Vec3<Scalar> axis{Vec3<Scalar>::Zero()};
  bool axis_defined{false};   // false when the rotation is (close to) +-identity
};

using AngleAxisd = AngleAxis<double>;

// Thrown by angle_relative_to when the residual rotation exceeds pi/2 and a
// signed small-angle reading is meaningless.
struct OutOfLinearRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
Rotation<Scalar> identity_rotation() {
  return Rotation<Scalar>::Identity();
}

template <typename Scalar>
Rotation<Scalar> from_axis_angle(const Vec3<Scalar>& axis, Scalar angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("from_axis_angle: non-finite angle");
  const Scalar n = axis.norm();
  if (angle != Scalar(0) && std::abs(n - Scalar(1)) > Scalar(1e-9))
    throw std::invalid_argument("from_axis_angle: axis must be unit length");
  const Scalar half = angle / Scalar(2);
  const Vec3<Scalar> v = std::sin(half) * axis;
  return Rotation<Scalar>(std::cos(half), v.x(), v.y(), v.z());
}

// Applies `first`, then `second` (quaternion product second * first), renormalized.
template <typename Scalar>
Rotation<Scalar> compose(const Rotation<Scalar>& first, const Rotation<Scalar>& second) {
  Rotation<Scalar> r = second * first;
  r.normalize();
  return r;
}

template <typename Scalar>
Rotation<Scalar> inverse(const Rotation<Scalar>& r) {
  return r.conjugate();
}

template <typename Scalar>
AngleAxis<Scalar> to_angle_axis(const Rotation<Scalar>& r) {
  AngleAxis<Scalar> out;
  const Vec3<Scalar> v = r.vec();
  const Scalar vn = v.norm();
  out.angle = Scalar(2) * std::atan2(vn, r.w());
  if (vn > Scalar(1e-12)) {
    out.axis = v / vn;
    out.axis_defined = true;
  }
  return out;
}

// Signed deviation d such that r ~ rotation by (reference.angle + d) about an
// axis near reference.axis. Sign follows the projection of the residual axis
// onto the reference axis. Valid only in the small-residual regime.
template <typename Scalar>
Scalar angle_relative_to(const Rotation<Scalar>& r, const AngleAxis<Scalar>& reference) {
  if (!reference.axis_defined)
    throw std::invalid_argument("angle_relative_to: reference axis undefined");
  const Rotation<Scalar> ref =
      from_axis_angle<Scalar>(reference.axis.normalized(), reference.angle);
  // Apply ref^-1 first, then r; for small residuals the order is immaterial.
  const Rotation<Scalar> residual = compose(inverse(ref), r);
  AngleAxis<Scalar> aa = to_angle_axis(residual);
  if (!aa.axis_defined) return Scalar(0);
  Scalar angle = aa.angle;
  Vec3<Scalar> axis = aa.axis;
  if (angle > Scalar(M_PI)) {  // other SU(2) sheet: same SO(3) rotation
    angle = Scalar(2 * M_PI) - angle;
    axis = -axis;
  }
  if (angle > Scalar(M_PI / 2))
    throw OutOfLinearRegime("angle_relative_to: residual rotation exceeds pi/2");
  return axis.dot(reference.axis) >= Scalar(0) ? angle : -angle;
}

// Adjoint action q v q* on a polarization vector; an isometry.
template <typename Scalar>
Vec3<Scalar> apply(const Rotation<Scalar>& r, const Vec3<Scalar>& s) {
  return r._transformVector(s);
}

// Overlap probability of the pure state along `final` with the one along
// `initial`: (1 + initial . final) / 2.
template <typename Scalar>
Scalar state_fidelity(const Vec3<Scalar>& initial, const Vec3<Scalar>& final_state) {
  if (initial.norm() < Scalar(1e-12))
    throw std::invalid_argument("state_fidelity: zero-length initial state");
  return (Scalar(1) + initial.dot(final_state)) / Scalar(2);
}

}  // namespace ddsim

#pragma once

#include <Eigen/Dense>

namespace livo {

using Eigen::Matrix3d;
using Eigen::Vector3d;

inline Matrix3d skew(const Vector3d& v) {
  Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

// Rodrigues exponential map, stable for small angles.
Matrix3d exp_so3(const Vector3d& phi);

// Inverse of exp_so3. Angle returned in [0, pi]; at exactly pi the axis
// follows Eigen's AngleAxis convention (largest diagonal element), which is
// a fixed deterministic rule.
Vector3d log_so3(const Matrix3d& rot);

// Right Jacobian of SO(3) and its inverse.
Matrix3d right_jacobian_so3(const Vector3d& phi);
Matrix3d right_jacobian_inverse_so3(const Vector3d& phi);

// Re-orthonormalize a rotation matrix via its quaternion.
Matrix3d renormalize_rotation(const Matrix3d& rot);

// Rigid transform, rotation + translation.
struct Pose {
  Matrix3d rotation = Matrix3d::Identity();
  Vector3d translation = Vector3d::Zero();

  Vector3d operator*(const Vector3d& p) const { return rotation * p + translation; }

  Pose operator*(const Pose& other) const {
    return Pose{rotation * other.rotation, rotation * other.translation + translation};
  }

  Pose inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -inv.rotation * translation;
    return inv;
  }
};

// Translation distance and geodesic rotation angle between two poses.
double position_delta(const Pose& a, const Pose& b);
double rotation_delta(const Pose& a, const Pose& b);

}  // namespace livo

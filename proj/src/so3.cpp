#include "livo/so3.hpp"

#include <cmath>

namespace livo {

namespace {
constexpr double kSmallAngle = 1e-8;
}

Matrix3d exp_so3(const Vector3d& phi) {
  const double theta = phi.norm();
  const Matrix3d hat = skew(phi);
  if (theta < kSmallAngle) {
    return Matrix3d::Identity() + hat + 0.5 * hat * hat;
  }
  const double s = std::sin(theta) / theta;
  const double c = (1.0 - std::cos(theta)) / (theta * theta);
  return Matrix3d::Identity() + s * hat + c * hat * hat;
}

Vector3d log_so3(const Matrix3d& rot) {
  Eigen::AngleAxisd aa(rot);
  return aa.angle() * aa.axis();
}

Matrix3d right_jacobian_so3(const Vector3d& phi) {
  const double theta = phi.norm();
  const Matrix3d hat = skew(phi);
  if (theta < kSmallAngle) {
    return Matrix3d::Identity() - 0.5 * hat + (1.0 / 6.0) * hat * hat;
  }
  const double t2 = theta * theta;
  const double a = (1.0 - std::cos(theta)) / t2;
  const double b = (theta - std::sin(theta)) / (t2 * theta);
  return Matrix3d::Identity() - a * hat + b * hat * hat;
}

Matrix3d right_jacobian_inverse_so3(const Vector3d& phi) {
  const double theta = phi.norm();
  const Matrix3d hat = skew(phi);
  if (theta < kSmallAngle) {
    return Matrix3d::Identity() + 0.5 * hat + (1.0 / 12.0) * hat * hat;
  }
  const double half = 0.5 * theta;
  const double cot = 1.0 / std::tan(half);
  const double b = (1.0 / (theta * theta)) * (1.0 - half * cot);
  return Matrix3d::Identity() + 0.5 * hat + b * hat * hat;
}

Matrix3d renormalize_rotation(const Matrix3d& rot) {
  Eigen::Quaterniond q(rot);
  q.normalize();
  return q.toRotationMatrix();
}

double position_delta(const Pose& a, const Pose& b) {
  return (a.translation - b.translation).norm();
}

double rotation_delta(const Pose& a, const Pose& b) {
  return log_so3(a.rotation.transpose() * b.rotation).norm();
}

}  // namespace livo

#include "livo/state.hpp"

#include <stdexcept>

#include "livo/errors.hpp"

namespace livo {

namespace {

bool finite(const Vector3d& v) { return v.allFinite(); }

void check_state(const StateVector& x) {
  if (!x.rotation.allFinite() || !finite(x.position) || !finite(x.velocity) ||
      !finite(x.gyro_bias) || !finite(x.accel_bias) || !finite(x.gravity)) {
    throw std::invalid_argument("state contains non-finite values");
  }
}

}  // namespace

StateVector boxplus(const StateVector& x, const ErrorState& d) {
  if (!d.allFinite()) throw std::invalid_argument("boxplus: non-finite perturbation");
  check_state(x);
  StateVector y = x;
  y.rotation = renormalize_rotation(x.rotation * exp_so3(d.segment<3>(kIdxTheta)));
  y.position += d.segment<3>(kIdxPos);
  y.velocity += d.segment<3>(kIdxVel);
  y.gyro_bias += d.segment<3>(kIdxGyroBias);
  y.accel_bias += d.segment<3>(kIdxAccelBias);
  y.gravity += d.segment<3>(kIdxGravity);
  return y;
}

ErrorState boxminus(const StateVector& y, const StateVector& x) {
  check_state(x);
  check_state(y);
  ErrorState d;
  d.segment<3>(kIdxTheta) = log_so3(x.rotation.transpose() * y.rotation);
  d.segment<3>(kIdxPos) = y.position - x.position;
  d.segment<3>(kIdxVel) = y.velocity - x.velocity;
  d.segment<3>(kIdxGyroBias) = y.gyro_bias - x.gyro_bias;
  d.segment<3>(kIdxAccelBias) = y.accel_bias - x.accel_bias;
  d.segment<3>(kIdxGravity) = y.gravity - x.gravity;
  return d;
}

StateVector discrete_transition(const StateVector& x, const ImuSample& u, double dt,
                                const NoiseVector& w) {
  const Vector3d omega = u.angular_velocity - x.gyro_bias - w.segment<3>(0);
  const Vector3d accel = u.linear_acceleration - x.accel_bias - w.segment<3>(3);

  StateVector y = x;
  y.rotation = renormalize_rotation(x.rotation * exp_so3(omega * dt));
  y.position = x.position + x.velocity * dt;
  y.velocity = x.velocity + (x.rotation * accel + x.gravity) * dt;
  y.gyro_bias = x.gyro_bias + w.segment<3>(6) * dt;
  y.accel_bias = x.accel_bias + w.segment<3>(9) * dt;
  return y;
}

void transition_jacobians(const StateVector& x, const ImuSample& u, double dt,
                          TransitionJacobian* f_x, NoiseJacobian* f_w) {
  const Vector3d omega = u.angular_velocity - x.gyro_bias;
  const Vector3d accel = u.linear_acceleration - x.accel_bias;
  const Vector3d phi = omega * dt;
  const Matrix3d jr = right_jacobian_so3(phi);
  const Matrix3d eye = Matrix3d::Identity();

  if (f_x) {
    f_x->setIdentity();
    f_x->block<3, 3>(kIdxTheta, kIdxTheta) = exp_so3(phi).transpose();
    f_x->block<3, 3>(kIdxTheta, kIdxGyroBias) = -jr * dt;
    f_x->block<3, 3>(kIdxPos, kIdxVel) = eye * dt;
    f_x->block<3, 3>(kIdxVel, kIdxTheta) = -x.rotation * skew(accel) * dt;
    f_x->block<3, 3>(kIdxVel, kIdxAccelBias) = -x.rotation * dt;
    f_x->block<3, 3>(kIdxVel, kIdxGravity) = eye * dt;
  }
  if (f_w) {
    f_w->setZero();
    f_w->block<3, 3>(kIdxTheta, 0) = -jr * dt;
    f_w->block<3, 3>(kIdxVel, 3) = -x.rotation * dt;
    f_w->block<3, 3>(kIdxGyroBias, 6) = eye * dt;
    f_w->block<3, 3>(kIdxAccelBias, 9) = eye * dt;
  }
}

Propagated propagate(const StateVector& x, const CovarianceMatrix& p, const ImuSample& u,
                     double dt, const ProcessNoise& q) {
  if (!(dt > 0.0) || dt >= 0.1) {
    throw PropagationGapError("propagate: dt out of range (0, 0.1): " + std::to_string(dt));
  }
  check_state(x);

  TransitionJacobian f_x;
  NoiseJacobian f_w;
  transition_jacobians(x, u, dt, &f_x, &f_w);

  Propagated out;
  out.state = discrete_transition(x, u, dt, NoiseVector::Zero());
  out.covariance = f_x * p * f_x.transpose() + f_w * q * f_w.transpose();
  sanitize_covariance(out.covariance);
  return out;
}

void sanitize_covariance(CovarianceMatrix& p) {
  p = 0.5 * (p + p.transpose()).eval();
  Eigen::LDLT<CovarianceMatrix> ldlt(p);
  const double scale = std::max(1.0, p.diagonal().cwiseAbs().maxCoeff());
  if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() >= -1e-9 * scale) return;
  // Rare fallback: clamp negative eigenvalues.
  Eigen::SelfAdjointEigenSolver<CovarianceMatrix> eig(p);
  Eigen::Matrix<double, kErrDim, 1> ev = eig.eigenvalues().cwiseMax(0.0);
  p = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
  p = 0.5 * (p + p.transpose()).eval();
}

ProcessNoise process_noise(double gyro_sigma, double accel_sigma, double gyro_walk_sigma,
                           double accel_walk_sigma, double dt) {
  ProcessNoise q = ProcessNoise::Zero();
  q.block<3, 3>(0, 0) = Matrix3d::Identity() * (gyro_sigma * gyro_sigma / dt);
  q.block<3, 3>(3, 3) = Matrix3d::Identity() * (accel_sigma * accel_sigma / dt);
  q.block<3, 3>(6, 6) = Matrix3d::Identity() * (gyro_walk_sigma * gyro_walk_sigma / dt);
  q.block<3, 3>(9, 9) = Matrix3d::Identity() * (accel_walk_sigma * accel_walk_sigma / dt);
  return q;
}

}  // namespace livo

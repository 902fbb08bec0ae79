#pragma once

#include <Eigen/Dense>
#include <vector>

#include "livo/so3.hpp"

namespace livo {

// Tangent-space block layout. Frozen contract shared by ErrorState,
// CovarianceMatrix and every measurement Jacobian.
constexpr int kErrDim = 18;
constexpr int kIdxTheta = 0;
constexpr int kIdxPos = 3;
constexpr int kIdxVel = 6;
constexpr int kIdxGyroBias = 9;
constexpr int kIdxAccelBias = 12;
constexpr int kIdxGravity = 15;

using ErrorState = Eigen::Matrix<double, kErrDim, 1>;
using CovarianceMatrix = Eigen::Matrix<double, kErrDim, kErrDim>;

// Process noise over (n_gyro, n_accel, n_gyro_walk, n_accel_walk).
constexpr int kNoiseDim = 12;
using ProcessNoise = Eigen::Matrix<double, kNoiseDim, kNoiseDim>;
using NoiseVector = Eigen::Matrix<double, kNoiseDim, 1>;
using TransitionJacobian = Eigen::Matrix<double, kErrDim, kErrDim>;
using NoiseJacobian = Eigen::Matrix<double, kErrDim, kNoiseDim>;

struct StateVector {
  Matrix3d rotation = Matrix3d::Identity();  // world from IMU
  Vector3d position = Vector3d::Zero();      // m, world
  Vector3d velocity = Vector3d::Zero();      // m/s, world
  Vector3d gyro_bias = Vector3d::Zero();     // rad/s
  Vector3d accel_bias = Vector3d::Zero();    // m/s^2
  Vector3d gravity = Vector3d(0, 0, -9.81);  // m/s^2, world

  Pose pose() const { return Pose{rotation, position}; }
};

struct ImuSample {
  double timestamp = 0;                        // s
  Vector3d angular_velocity = Vector3d::Zero();     // rad/s, body
  Vector3d linear_acceleration = Vector3d::Zero();  // m/s^2, body
};

// Retraction: rotation composed on the right with exp(delta_theta), vector
// blocks added componentwise. Throws std::invalid_argument on non-finite
// input.
StateVector boxplus(const StateVector& x, const ErrorState& d);

// Inverse of boxplus; rotation block is log(R_x^T R_y).
ErrorState boxminus(const StateVector& y, const StateVector& x);

// Discrete transition x + dt*f(x, u, w) for noise vector w. The noise enters
// the kinematics exactly as in the error-state model, so finite differences
// of this function are the oracle for the analytic Jacobians below.
StateVector discrete_transition(const StateVector& x, const ImuSample& u, double dt,
                                const NoiseVector& w);

// Analytic Jacobians of the discrete transition w.r.t. the error state and
// the noise vector, both evaluated at w = 0.
void transition_jacobians(const StateVector& x, const ImuSample& u, double dt,
                          TransitionJacobian* f_x, NoiseJacobian* f_w);

struct Propagated {
  StateVector state;
  CovarianceMatrix covariance;
};

// Forward-Euler mean propagation plus covariance through the analytic
// Jacobians. dt must lie in (0, 0.1) s; throws PropagationGapError otherwise.
Propagated propagate(const StateVector& x, const CovarianceMatrix& p, const ImuSample& u,
                     double dt, const ProcessNoise& q);

// Symmetrize; if the symmetric part is indefinite beyond tolerance, clamp
// negative eigenvalues to zero.
void sanitize_covariance(CovarianceMatrix& p);

// Continuous noise densities mapped to the discrete ProcessNoise block for a
// step dt (density^2 / dt on the diagonal).
ProcessNoise process_noise(double gyro_sigma, double accel_sigma, double gyro_walk_sigma,
                           double accel_walk_sigma, double dt);

}  // namespace livo

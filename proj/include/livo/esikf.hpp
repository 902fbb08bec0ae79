#pragma once

#include <functional>

#include <Eigen/Dense>

#include "livo/state.hpp"

namespace livo {

// Stacked linearized measurements at one iteration's linearization point.
// Row k models 0 = residual(k) + H(k,:) dx + v_k with var(v_k) = 1/inv_var(k).
struct MeasurementBlock {
  Eigen::MatrixXd jacobian;   // N x 18
  Eigen::VectorXd residual;   // N
  Eigen::VectorXd inv_var;    // N, robust weights folded in
  std::size_t rows() const { return static_cast<std::size_t>(residual.size()); }
};

using ResidualBuilder = std::function<MeasurementBlock(const StateVector&)>;

struct EsikfConfig {
  double epsilon = 1e-4;  // convergence threshold on the tangent-norm step
  int max_iterations = 5;
};

struct EsikfResult {
  StateVector state;
  CovarianceMatrix covariance;
  bool converged = false;
  int iterations = 0;
  std::size_t residual_count = 0;  // rows at the final iteration
};

// Iterated error-state update. Rebuilds residuals and Jacobians at every
// iteration; the prior is projected into the current tangent space through
// the boxplus Jacobian (right-Jacobian inverse on the rotation block). With
// zero rows the prior passes through unchanged.
EsikfResult iterated_update(const StateVector& prior_state, const CovarianceMatrix& prior_cov,
                            const ResidualBuilder& builder, const EsikfConfig& config,
                            bool commit_covariance = true);

}  // namespace livo

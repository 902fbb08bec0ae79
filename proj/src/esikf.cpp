#include "livo/esikf.hpp"

namespace livo {

namespace {

// Inverse boxplus Jacobian at the current error: identity except the
// rotation block, which is the right Jacobian of the accumulated delta.
CovarianceMatrix inverse_projection(const ErrorState& delta) {
  CovarianceMatrix j_inv = CovarianceMatrix::Identity();
  j_inv.block<3, 3>(kIdxTheta, kIdxTheta) = right_jacobian_so3(delta.segment<3>(kIdxTheta));
  return j_inv;
}

}  // namespace

EsikfResult iterated_update(const StateVector& prior_state, const CovarianceMatrix& prior_cov,
                            const ResidualBuilder& builder, const EsikfConfig& config,
                            bool commit_covariance) {
  EsikfResult result;
  result.state = prior_state;
  result.covariance = prior_cov;

  StateVector x = prior_state;
  CovarianceMatrix projected = prior_cov;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    result.iterations = iter + 1;

    const ErrorState delta_prior = boxminus(x, prior_state);
    const CovarianceMatrix j_inv = inverse_projection(delta_prior);
    projected = j_inv * prior_cov * j_inv.transpose();
    sanitize_covariance(projected);

    const MeasurementBlock block = builder(x);
    result.residual_count = block.rows();

    if (block.rows() == 0) {
      // Nothing to correct beyond pulling the state back toward the prior.
      const ErrorState step = -(j_inv * delta_prior);
      x = boxplus(x, step);
      result.state = x;
      result.converged = step.norm() < config.epsilon;
      if (commit_covariance) result.covariance = projected;
      if (result.converged) return result;
      continue;
    }

    const CovarianceMatrix p_info = projected.ldlt().solve(CovarianceMatrix::Identity());
    CovarianceMatrix s = p_info;
    ErrorState rhs = p_info * (j_inv * delta_prior);
    const Eigen::MatrixXd weighted = block.inv_var.asDiagonal() * block.jacobian;
    s.noalias() += block.jacobian.transpose() * weighted;
    rhs.noalias() += block.jacobian.transpose() * (block.inv_var.asDiagonal() * block.residual);

    const Eigen::LDLT<CovarianceMatrix> s_ldlt(s);
    const ErrorState step = -s_ldlt.solve(rhs);
    x = boxplus(x, step);

    if (step.norm() < config.epsilon) {
      result.converged = true;
      if (commit_covariance) {
        result.covariance = s_ldlt.solve(CovarianceMatrix::Identity());
        sanitize_covariance(result.covariance);
      }
      result.state = x;
      return result;
    }
  }

  // Hit the iteration cap: commit covariance at the final linearization.
  result.state = x;
  if (commit_covariance) {
    const ErrorState delta_prior = boxminus(x, prior_state);
    const CovarianceMatrix j_inv = inverse_projection(delta_prior);
    projected = j_inv * prior_cov * j_inv.transpose();
    sanitize_covariance(projected);
    const MeasurementBlock block = builder(x);
    result.residual_count = block.rows();
    if (block.rows() == 0) {
      result.covariance = projected;
      return result;
    }
    CovarianceMatrix s = projected.ldlt().solve(CovarianceMatrix::Identity());
    s.noalias() += block.jacobian.transpose() *
                   (block.inv_var.asDiagonal() * block.jacobian).eval();
    result.covariance = s.ldlt().solve(CovarianceMatrix::Identity());
    sanitize_covariance(result.covariance);
  }
  return result;
}

}  // namespace livo

#include "livo/degeneracy.hpp"

namespace livo {

ConstraintSpectrum constraint_spectrum(std::span<const Eigen::Vector3d> normals,
                                       std::span<const double> weights) {
  ConstraintSpectrum spectrum;
  if (normals.empty()) return spectrum;

  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    m.noalias() += w * normals[i] * normals[i].transpose();
  }

  // m is symmetric PSD, so its singular values equal its eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  Eigen::Vector3d sv = eig.eigenvalues().cwiseMax(0.0);
  const double norm = sv.norm();
  if (norm <= 0.0) return spectrum;
  sv /= norm;

  spectrum.sigma_min = sv(0);
  spectrum.sigma_mid = sv(1);
  spectrum.sigma_max = sv(2);
  spectrum.valid = true;
  return spectrum;
}

void DegeneracyTracker::update(const ConstraintSpectrum& spectrum, std::int64_t frame) {
  const bool below = !spectrum.valid || spectrum.sigma_min < config_.threshold;
  below_count_ = below ? below_count_ + 1 : 0;
  flag_ = below_count_ >= config_.required_consecutive;

  history_.push_back({frame, spectrum.valid ? spectrum.sigma_min : 0.0});
  if (history_.size() > config_.history_capacity) history_.pop_front();
}

}  // namespace livo

#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace livo {

// Unit-normalized singular values of the translational constraint matrix
// sum_i w_i n_i n_i^T, sorted ascending. sigma_min lies in [0, 1/sqrt(3)].
struct ConstraintSpectrum {
  double sigma_min = 0;
  double sigma_mid = 0;
  double sigma_max = 0;
  bool valid = false;  // false for an empty normal set (maximally degenerate)
};

ConstraintSpectrum constraint_spectrum(std::span<const Eigen::Vector3d> normals,
                                       std::span<const double> weights = {});

struct DegeneracyConfig {
  double threshold = 0.07;
  int required_consecutive = 3;
  std::size_t history_capacity = 4096;
};

struct DegeneracyRecord {
  std::int64_t frame = 0;
  double sigma_min = 0;
};

// Hysteresis flag: degenerate once sigma_min stays below the threshold for
// required_consecutive frames in a row; any frame above resets the counter.
class DegeneracyTracker {
 public:
  explicit DegeneracyTracker(const DegeneracyConfig& config = {}) : config_(config) {}

  void update(const ConstraintSpectrum& spectrum, std::int64_t frame);

  bool degenerate() const { return flag_; }
  int below_count() const { return below_count_; }
  const DegeneracyConfig& config() const { return config_; }
  const std::deque<DegeneracyRecord>& history() const { return history_; }

 private:
  DegeneracyConfig config_;
  bool flag_ = false;
  int below_count_ = 0;
  std::deque<DegeneracyRecord> history_;
};

}  // namespace livo

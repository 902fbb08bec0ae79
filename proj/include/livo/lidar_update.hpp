#pragma once

#include <span>
#include <vector>

#include "livo/esikf.hpp"
#include "livo/parallel.hpp"
#include "livo/state.hpp"
#include "livo/voxel_map.hpp"

namespace livo {

struct LidarScan {
  struct TimedPoint {
    double timestamp = 0;          // s, absolute
    Vector3d point = Vector3d::Zero();  // m, LiDAR frame at capture time
  };
  std::vector<TimedPoint> points;
  double scan_start = 0;
  double scan_end = 0;
};

// Motion compensation: transforms every point into the LiDAR frame at
// scan_end using poses integrated from the IMU stream. `state` is the filter
// state at scan_start. Throws UndistortionGapError when the IMU stream
// leaves a gap above max_imu_gap inside the scan window.
std::vector<Vector3d> undistort(const LidarScan& scan, std::span<const ImuSample> imu_stream,
                                const StateVector& state, const Pose& imu_from_lidar,
                                double max_imu_gap = 0.02,
                                ExecPolicy policy = ExecPolicy::kParallel);

struct PointToPlaneResidual {
  Vector3d world_point = Vector3d::Zero();
  PlaneFeature plane;
  double residual = 0;                      // signed meters along the normal
  Eigen::Matrix<double, 1, 6> jacobian;     // over (dtheta, dpos)
  double noise = 0;                         // variance: beam + plane uncertainty
};

struct ResidualParams {
  double gate = 0.3;              // m, association gate on |residual|
  double mahalanobis_sigma = 3.0;
  double beam_sigma = 0.02;       // m
  Pose imu_from_lidar;
};

struct ResidualSet {
  std::vector<PointToPlaneResidual> residuals;
  std::size_t attempted = 0;
  std::size_t unassociated = 0;
};

// Point-to-plane association and linearization against the voxel map.
// Points are in the scan-end LiDAR frame; the map is read-only here.
ResidualSet build_residuals(const StateVector& state, std::span<const Vector3d> lidar_points,
                            const VoxelMap& map, const ResidualParams& params,
                            ExecPolicy policy = ExecPolicy::kParallel);

struct LidarUpdateResult {
  EsikfResult estimate;
  std::vector<Vector3d> final_normals;  // accepted associations, last iteration
  std::size_t final_residual_count = 0;
  bool underconstrained = false;  // fewer than 6 residuals at the final iteration
};

// Iterated ESIKF LiDAR update; rebuilds associations every iteration and
// exposes the final normal set for the degeneracy evaluator.
LidarUpdateResult lidar_iterated_update(const StateVector& state, const CovarianceMatrix& cov,
                                        std::span<const Vector3d> lidar_points,
                                        const VoxelMap& map, const ResidualParams& params,
                                        const EsikfConfig& config,
                                        ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace livo

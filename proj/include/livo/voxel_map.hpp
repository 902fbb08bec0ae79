#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "livo/visual_point.hpp"

namespace livo {

// Fixed per-record sizes used by memory accounting. Declared once so every
// report row derives from the same model.
namespace memory_model {
constexpr std::size_t kBytesPerVoxelEntry = 64;    // hash slot, key, root pointer
constexpr std::size_t kBytesPerOctreeNode = 288;   // stats, plane, bookkeeping
constexpr std::size_t kBytesPerRawPoint = 24;      // 3 doubles
constexpr std::size_t kBytesPerVisualPoint = 912;  // 3x64 float patch + metadata
constexpr std::size_t kBytesPerLongTermCell = 48;  // key + list header
}  // namespace memory_model

struct VoxelKey {
  std::int64_t ix = 0, iy = 0, iz = 0;

  bool operator==(const VoxelKey&) const = default;
  // Lexicographic; gives deterministic iteration wherever ordering matters.
  auto operator<=>(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    // Large-prime mix of the three indices.
    const std::uint64_t h = static_cast<std::uint64_t>(k.ix) * 73856093ULL ^
                            static_cast<std::uint64_t>(k.iy) * 471943ULL ^
                            static_cast<std::uint64_t>(k.iz) * 83492791ULL;
    return static_cast<std::size_t>(h);
  }
};

// Per-axis floor division; bijective with the containing voxel.
VoxelKey voxel_key(const Vector3d& point, double root_size);
Vector3d voxel_center(const VoxelKey& key, double root_size);

struct PlaneFeature {
  Vector3d center = Vector3d::Zero();
  Vector3d normal = Vector3d::UnitZ();
  Eigen::Matrix<double, 6, 6> uncertainty =
      Eigen::Matrix<double, 6, 6>::Zero();  // over (normal, center)
  int point_count = 0;
  double planarity = 1.0;  // smallest/middle eigenvalue ratio; lower is flatter
};

// Exact sufficient statistics for incremental plane fitting.
struct PointStats {
  std::size_t count = 0;
  Vector3d sum = Vector3d::Zero();
  Matrix3d sum_outer = Matrix3d::Zero();

  void add(const Vector3d& p) {
    ++count;
    sum += p;
    sum_outer.noalias() += p * p.transpose();
  }

  Vector3d mean() const { return sum / static_cast<double>(count); }

  // Normalized scatter (covariance of the points).
  Matrix3d scatter() const {
    const Vector3d m = mean();
    return sum_outer / static_cast<double>(count) - m * m.transpose();
  }
};

struct PlaneFitConfig {
  int min_points_for_plane = 10;
  double planarity_threshold = 0.1;
  double point_sigma = 0.02;  // isotropic per-point noise feeding uncertainty
};

// Eigen-decomposition plane fit from sufficient statistics. Returns nullopt
// when the point set is not planar (or has too few points). The uncertainty
// is the first-order sensitivity of the eigen-solution to the per-point
// noise; it depends on the stats only.
std::optional<PlaneFeature> plane_from_stats(const PointStats& stats, const PlaneFitConfig& config);
std::optional<PlaneFeature> fit_plane(std::span<const Vector3d> points,
                                      const PlaneFitConfig& config);

class OctreeNode {
 public:
  OctreeNode(int level, const Vector3d& center, double half_size)
      : level_(level), center_(center), half_size_(half_size) {}

  int level() const { return level_; }
  const Vector3d& center() const { return center_; }
  double half_size() const { return half_size_; }
  bool is_split() const { return split_; }
  const std::optional<PlaneFeature>& plane() const { return plane_; }
  const std::vector<Vector3d>& points() const { return points_; }
  const std::array<std::unique_ptr<OctreeNode>, 8>& children() const { return children_; }
  const PointStats& stats() const { return stats_; }

  std::vector<VisualPoint>& visual_points() { return visual_points_; }
  const std::vector<VisualPoint>& visual_points() const { return visual_points_; }

  bool contains(const Vector3d& p) const {
    return (p - center_).cwiseAbs().maxCoeff() <= half_size_ + 1e-12;
  }

 private:
  friend class VoxelMap;

  int octant_of(const Vector3d& p) const {
    return (p.x() >= center_.x() ? 1 : 0) | (p.y() >= center_.y() ? 2 : 0) |
           (p.z() >= center_.z() ? 4 : 0);
  }

  int level_;
  Vector3d center_;
  double half_size_;
  bool split_ = false;
  bool dirty_ = false;  // stats changed since last fit
  std::uint64_t insert_counter_ = 0;
  PointStats stats_;
  std::vector<Vector3d> points_;  // bounded reservoir of raw points
  std::optional<PlaneFeature> plane_;
  std::array<std::unique_ptr<OctreeNode>, 8> children_;
  std::vector<VisualPoint> visual_points_;
};

struct VoxelMapConfig {
  double root_size = 0.5;       // m
  double edge_length = 200.0;   // m, boundary cube side
  double slide_threshold = 20.0;  // m of motion before recentering
  int max_octree_level = 2;     // levels 0..2, three in total
  std::size_t node_point_cap = 100;
  PlaneFitConfig fit;
  std::uint64_t seed = 0;  // reservoir retention stream
};

struct UpdateSummary {
  std::size_t inserted = 0;
  std::size_t skipped_outside = 0;
  std::size_t new_voxels = 0;
  std::size_t refit_planes = 0;
  std::size_t subdivided_nodes = 0;
};

struct MapMemoryReport {
  std::size_t voxel_count = 0;
  std::size_t node_count = 0;
  std::size_t point_count = 0;
  std::size_t visual_point_count = 0;
  std::size_t estimated_bytes = 0;

  bool operator==(const MapMemoryReport&) const = default;
};

// Unified local map: hash-indexed 0.5 m root voxels, each a three-level
// adaptive octree fitting planes at the coarsest scale that stays planar.
// Single writer; queries are safe between write phases.
class VoxelMap {
 public:
  explicit VoxelMap(const VoxelMapConfig& config = {},
                    const Vector3d& initial_center = Vector3d::Zero());

  UpdateSummary update(std::span<const Vector3d> world_points);

  // Deepest plane on the descent path containing the point; nullptr if none.
  const PlaneFeature* query_plane(const Vector3d& world_point) const;

  // Evicts voxels whose centers left the boundary cube recentered at the
  // robot position; returns their visual points for long-term transfer.
  // No-op while motion since the last slide stays under the threshold.
  std::vector<VisualPoint> slide(const Vector3d& robot_position);

  MapMemoryReport memory_stats() const;

  // Attach a visual point to the deepest node containing its position.
  // Returns false when the position is not covered by any planar voxel.
  bool attach_visual_point(VisualPoint point);

  // Deterministic traversal (key order) of all visual points.
  void for_each_visual_point(const std::function<void(VisualPoint&)>& fn);
  void for_each_visual_point(const std::function<void(const VisualPoint&)>& fn) const;

  // One line per octree node that carries a plane or visual points:
  //   P ix iy iz level cx cy cz nx ny nz point_count
  //   V ix iy iz level px py pz score
  void export_snapshot(std::ostream& os) const;

  const VoxelMapConfig& config() const { return config_; }
  const Vector3d& last_slide_center() const { return last_slide_center_; }
  std::size_t voxel_count() const { return table_.size(); }

 private:
  bool inside_boundary(const Vector3d& center, const Vector3d& boundary_center) const;
  void insert_point(OctreeNode& node, const Vector3d& p, UpdateSummary& summary);
  void refit_dirty(OctreeNode& node, UpdateSummary& summary);
  void subdivide(OctreeNode& node, UpdateSummary& summary);
  void reservoir_add(OctreeNode& node, const Vector3d& p);
  OctreeNode* leaf_for(const Vector3d& p);

  VoxelMapConfig config_;
  std::unordered_map<VoxelKey, std::unique_ptr<OctreeNode>, VoxelKeyHash> table_;
  std::set<VoxelKey> visual_keys_;  // roots holding visual points, ordered
  Vector3d last_slide_center_;
};

}  // namespace livo

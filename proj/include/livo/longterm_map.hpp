#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "livo/camera.hpp"
#include "livo/visual_point.hpp"
#include "livo/voxel_map.hpp"

namespace livo {

struct LongTermMapConfig {
  double cell_size = 2.0;          // m, coarser than the local map
  double edge_length = 800.0;      // m
  double slide_threshold = 100.0;  // m
  int max_points_per_cell = 5;
  double max_view_angle_deg = 60.0;  // gate between normal hint and viewing ray
};

struct AbsorbSummary {
  std::size_t absorbed = 0;
  std::size_t displaced = 0;  // dropped because a full cell held higher priority
};

// Sparse archive of visual points evicted from the local map. Cells are kept
// in an ordered map, so every traversal is deterministic.
class LongTermMap {
 public:
  explicit LongTermMap(const LongTermMapConfig& config = {},
                       const Vector3d& initial_center = Vector3d::Zero());

  AbsorbSummary absorb(std::vector<VisualPoint> evicted);

  // Points projecting inside the image with positive depth whose normal hint
  // faces the camera within the view-angle gate, ranked by observation score
  // and truncated to max_points. Pointers stay valid until the next absorb
  // or slide.
  std::vector<VisualPoint*> query_visible(const Pose& world_from_camera,
                                          const CameraModel& camera, std::size_t max_points);

  std::size_t slide(const Vector3d& robot_position);

  std::size_t cell_count() const { return table_.size(); }
  std::size_t point_count() const;
  std::size_t estimated_bytes() const;

  // Same line format as the local map snapshot, record type L.
  void export_snapshot(std::ostream& os) const;

  const LongTermMapConfig& config() const { return config_; }
  const Vector3d& last_slide_center() const { return last_slide_center_; }

 private:
  LongTermMapConfig config_;
  std::map<VoxelKey, std::vector<VisualPoint>> table_;
  Vector3d last_slide_center_;
};

}  // namespace livo

#include "livo/longterm_map.hpp"

#include <algorithm>
#include <cmath>

namespace livo {

namespace {

// Priority used when a cell overflows: higher score wins, then earlier
// observation, then lexicographic position.
bool higher_priority(const VisualPoint& a, const VisualPoint& b) {
  if (a.observation_score != b.observation_score) {
    return a.observation_score > b.observation_score;
  }
  if (a.last_observed != b.last_observed) return a.last_observed < b.last_observed;
  if (a.position.x() != b.position.x()) return a.position.x() < b.position.x();
  if (a.position.y() != b.position.y()) return a.position.y() < b.position.y();
  return a.position.z() < b.position.z();
}

}  // namespace

LongTermMap::LongTermMap(const LongTermMapConfig& config, const Vector3d& initial_center)
    : config_(config), last_slide_center_(initial_center) {}

AbsorbSummary LongTermMap::absorb(std::vector<VisualPoint> evicted) {
  AbsorbSummary summary;
  for (auto& vp : evicted) {
    const VoxelKey key = voxel_key(vp.position, config_.cell_size);
    auto& cell = table_[key];
    cell.push_back(std::move(vp));
    if (cell.size() > static_cast<std::size_t>(config_.max_points_per_cell)) {
      std::sort(cell.begin(), cell.end(), higher_priority);
      cell.resize(config_.max_points_per_cell);
      ++summary.displaced;
    } else {
      ++summary.absorbed;
    }
  }
  return summary;
}

std::vector<VisualPoint*> LongTermMap::query_visible(const Pose& world_from_camera,
                                                     const CameraModel& camera,
                                                     std::size_t max_points) {
  const Pose camera_from_world = world_from_camera.inverse();
  const double cos_gate = std::cos(config_.max_view_angle_deg * M_PI / 180.0);

  std::vector<VisualPoint*> visible;
  for (auto& [key, cell] : table_) {
    for (auto& vp : cell) {
      const Vector3d p_c = camera_from_world * vp.position;
      if (p_c.z() <= 0.1) continue;
      if (!camera.in_bounds(camera.project(p_c), patch_margin(kPyramidLevels - 1))) continue;
      const Vector3d to_camera = (world_from_camera.translation - vp.position).normalized();
      if (vp.normal_hint.dot(to_camera) <= cos_gate) continue;
      visible.push_back(&vp);
    }
  }
  std::stable_sort(visible.begin(), visible.end(),
                   [](const VisualPoint* a, const VisualPoint* b) {
                     return higher_priority(*a, *b);
                   });
  if (visible.size() > max_points) visible.resize(max_points);
  return visible;
}

std::size_t LongTermMap::slide(const Vector3d& robot_position) {
  if ((robot_position - last_slide_center_).norm() < config_.slide_threshold) return 0;

  std::size_t evicted = 0;
  for (auto it = table_.begin(); it != table_.end();) {
    const Vector3d center = voxel_center(it->first, config_.cell_size);
    if ((center - robot_position).cwiseAbs().maxCoeff() > 0.5 * config_.edge_length) {
      evicted += it->second.size();
      it = table_.erase(it);
    } else {
      ++it;
    }
  }
  last_slide_center_ = robot_position;
  return evicted;
}

std::size_t LongTermMap::point_count() const {
  std::size_t n = 0;
  for (const auto& [key, cell] : table_) n += cell.size();
  return n;
}

std::size_t LongTermMap::estimated_bytes() const {
  return cell_count() * memory_model::kBytesPerLongTermCell +
         point_count() * memory_model::kBytesPerVisualPoint;
}

void LongTermMap::export_snapshot(std::ostream& os) const {
  for (const auto& [key, cell] : table_) {
    for (const auto& vp : cell) {
      os << "L " << key.ix << ' ' << key.iy << ' ' << key.iz << " 0 " << vp.position.x() << ' '
         << vp.position.y() << ' ' << vp.position.z() << ' ' << vp.observation_score << '\n';
    }
  }
}

}  // namespace livo

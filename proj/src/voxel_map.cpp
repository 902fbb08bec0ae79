#include "livo/voxel_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "livo/rng.hpp"

namespace livo {

VoxelKey voxel_key(const Vector3d& point, double root_size) {
  return VoxelKey{static_cast<std::int64_t>(std::floor(point.x() / root_size)),
                  static_cast<std::int64_t>(std::floor(point.y() / root_size)),
                  static_cast<std::int64_t>(std::floor(point.z() / root_size))};
}

Vector3d voxel_center(const VoxelKey& key, double root_size) {
  return Vector3d((key.ix + 0.5) * root_size, (key.iy + 0.5) * root_size,
                  (key.iz + 0.5) * root_size);
}

std::optional<PlaneFeature> plane_from_stats(const PointStats& stats,
                                             const PlaneFitConfig& config) {
  if (stats.count < static_cast<std::size_t>(config.min_points_for_plane)) return std::nullopt;

  Eigen::SelfAdjointEigenSolver<Matrix3d> eig(stats.scatter());
  const Vector3d lambda = eig.eigenvalues().cwiseMax(0.0);  // ascending
  if (lambda(1) <= 1e-12) return std::nullopt;              // collinear or collapsed

  const double planarity = lambda(0) / lambda(1);
  if (planarity >= config.planarity_threshold) return std::nullopt;

  PlaneFeature plane;
  plane.center = stats.mean();
  plane.normal = eig.eigenvectors().col(0);
  // Deterministic sign: largest-magnitude component positive.
  int max_idx = 0;
  plane.normal.cwiseAbs().maxCoeff(&max_idx);
  if (plane.normal(max_idx) < 0) plane.normal = -plane.normal;
  plane.point_count = static_cast<int>(stats.count);
  plane.planarity = planarity;

  // First-order eigen-solution sensitivity to isotropic per-point noise.
  // With n points and scatter eigenpairs (lambda_k, u_k):
  //   cov(normal) = sigma^2/n * sum_{k>0} (l_0 + l_k)/(l_0 - l_k)^2 u_k u_k^T
  //   cov(center) = sigma^2/n * I, cross terms vanish.
  const double n = static_cast<double>(stats.count);
  const double sigma2 = config.point_sigma * config.point_sigma;
  Matrix3d cov_normal = Matrix3d::Zero();
  for (int k = 1; k < 3; ++k) {
    const double gap = lambda(0) - lambda(k);
    const double denom = std::max(gap * gap, 1e-12);
    const Vector3d u = eig.eigenvectors().col(k);
    cov_normal.noalias() += ((lambda(0) + lambda(k)) / denom) * u * u.transpose();
  }
  plane.uncertainty.setZero();
  plane.uncertainty.topLeftCorner<3, 3>() = (sigma2 / n) * cov_normal;
  plane.uncertainty.bottomRightCorner<3, 3>() = (sigma2 / n) * Matrix3d::Identity();
  return plane;
}

std::optional<PlaneFeature> fit_plane(std::span<const Vector3d> points,
                                      const PlaneFitConfig& config) {
  PointStats stats;
  for (const auto& p : points) stats.add(p);
  return plane_from_stats(stats, config);
}

namespace {

std::uint64_t center_stream(const Vector3d& c) {
  auto bits = [](double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    return b;
  };
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  return bits(c.x()) * 0x9e3779b97f4a7c15ULL ^ rotl(bits(c.y()), 21) ^ rotl(bits(c.z()), 42);
}

}  // namespace

VoxelMap::VoxelMap(const VoxelMapConfig& config, const Vector3d& initial_center)
    : config_(config), last_slide_center_(initial_center) {}

bool VoxelMap::inside_boundary(const Vector3d& center, const Vector3d& boundary_center) const {
  return (center - boundary_center).cwiseAbs().maxCoeff() <= 0.5 * config_.edge_length;
}

void VoxelMap::reservoir_add(OctreeNode& node, const Vector3d& p) {
  const std::uint64_t i = node.insert_counter_++;
  if (node.points_.size() < config_.node_point_cap) {
    node.points_.push_back(p);
    return;
  }
  CounterRng rng(config_.seed, rng_stream::indexed(rng_stream::kReservoir,
                                                   center_stream(node.center_)));
  const double u = rng.uniform_at(i);
  const auto slot = static_cast<std::size_t>(u * static_cast<double>(i + 1));
  if (slot < config_.node_point_cap) node.points_[slot] = p;
}

OctreeNode* VoxelMap::leaf_for(const Vector3d& p) {
  const VoxelKey key = voxel_key(p, config_.root_size);
  auto it = table_.find(key);
  if (it == table_.end()) return nullptr;
  OctreeNode* node = it->second.get();
  while (node->split_) {
    auto& child = node->children_[node->octant_of(p)];
    if (!child) return node;
    node = child.get();
  }
  return node;
}

void VoxelMap::insert_point(OctreeNode& root, const Vector3d& p, UpdateSummary& summary) {
  OctreeNode* node = &root;
  while (node->split_) {
    const int octant = node->octant_of(p);
    auto& child = node->children_[octant];
    if (!child) {
      const double h = 0.5 * node->half_size_;
      const Vector3d offset((octant & 1) ? h : -h, (octant & 2) ? h : -h, (octant & 4) ? h : -h);
      child = std::make_unique<OctreeNode>(node->level_ + 1, node->center_ + offset, h);
    }
    node = child.get();
  }
  node->stats_.add(p);
  reservoir_add(*node, p);
  node->dirty_ = true;
  ++summary.inserted;
}

void VoxelMap::subdivide(OctreeNode& node, UpdateSummary& summary) {
  node.split_ = true;
  node.plane_.reset();
  ++summary.subdivided_nodes;
  std::vector<Vector3d> retained;
  retained.swap(node.points_);
  UpdateSummary scratch;
  for (const auto& p : retained) insert_point(node, p, scratch);
  for (auto& child : node.children_) {
    if (child) refit_dirty(*child, summary);
  }
}

void VoxelMap::refit_dirty(OctreeNode& node, UpdateSummary& summary) {
  if (node.split_) {
    for (auto& child : node.children_) {
      if (child && child->dirty_) refit_dirty(*child, summary);
    }
    return;
  }
  node.dirty_ = false;
  if (node.stats_.count < static_cast<std::size_t>(config_.fit.min_points_for_plane)) return;

  auto plane = plane_from_stats(node.stats_, config_.fit);
  if (plane) {
    node.plane_ = std::move(plane);
    ++summary.refit_planes;
    return;
  }
  node.plane_.reset();
  if (node.level_ < config_.max_octree_level) subdivide(node, summary);
}

UpdateSummary VoxelMap::update(std::span<const Vector3d> world_points) {
  UpdateSummary summary;
  std::vector<OctreeNode*> touched;
  for (const auto& p : world_points) {
    const VoxelKey key = voxel_key(p, config_.root_size);
    const Vector3d center = voxel_center(key, config_.root_size);
    if (!inside_boundary(center, last_slide_center_)) {
      ++summary.skipped_outside;
      continue;
    }
    auto it = table_.find(key);
    if (it == table_.end()) {
      it = table_.emplace(key, std::make_unique<OctreeNode>(0, center, 0.5 * config_.root_size))
               .first;
      ++summary.new_voxels;
    }
    OctreeNode* root = it->second.get();
    if (!root->dirty_) touched.push_back(root);
    root->dirty_ = true;
    insert_point(*root, p, summary);
  }
  for (OctreeNode* node : touched) refit_dirty(*node, summary);
  return summary;
}

const PlaneFeature* VoxelMap::query_plane(const Vector3d& world_point) const {
  const VoxelKey key = voxel_key(world_point, config_.root_size);
  auto it = table_.find(key);
  if (it == table_.end()) return nullptr;

  const OctreeNode* node = it->second.get();
  const PlaneFeature* best = nullptr;
  while (node) {
    if (node->plane_ && node->contains(world_point)) best = &*node->plane_;
    if (!node->split_) break;
    node = node->children_[node->octant_of(world_point)].get();
  }
  return best;
}

std::vector<VisualPoint> VoxelMap::slide(const Vector3d& robot_position) {
  std::vector<VisualPoint> evicted;
  if ((robot_position - last_slide_center_).norm() < config_.slide_threshold) return evicted;

  std::function<void(OctreeNode&)> collect = [&](OctreeNode& node) {
    for (auto& vp : node.visual_points_) evicted.push_back(std::move(vp));
    node.visual_points_.clear();
    for (auto& child : node.children_) {
      if (child) collect(*child);
    }
  };

  std::vector<VoxelKey> to_remove;
  for (const auto& [key, node] : table_) {
    if (!inside_boundary(voxel_center(key, config_.root_size), robot_position)) {
      to_remove.push_back(key);
    }
  }
  std::sort(to_remove.begin(), to_remove.end());
  for (const VoxelKey& key : to_remove) {
    auto it = table_.find(key);
    collect(*it->second);
    table_.erase(it);
    visual_keys_.erase(key);
  }
  last_slide_center_ = robot_position;
  return evicted;
}

MapMemoryReport VoxelMap::memory_stats() const {
  MapMemoryReport report;
  report.voxel_count = table_.size();

  std::function<void(const OctreeNode&)> visit = [&](const OctreeNode& node) {
    ++report.node_count;
    report.point_count += node.points().size();
    report.visual_point_count += node.visual_points().size();
    for (const auto& child : node.children()) {
      if (child) visit(*child);
    }
  };
  for (const auto& [key, node] : table_) visit(*node);

  report.estimated_bytes = report.voxel_count * memory_model::kBytesPerVoxelEntry +
                           report.node_count * memory_model::kBytesPerOctreeNode +
                           report.point_count * memory_model::kBytesPerRawPoint +
                           report.visual_point_count * memory_model::kBytesPerVisualPoint;
  return report;
}

bool VoxelMap::attach_visual_point(VisualPoint point) {
  const VoxelKey key = voxel_key(point.position, config_.root_size);
  OctreeNode* node = leaf_for(point.position);
  if (!node) return false;
  node->visual_points_.push_back(std::move(point));
  visual_keys_.insert(key);
  return true;
}

void VoxelMap::for_each_visual_point(const std::function<void(VisualPoint&)>& fn) {
  std::function<void(OctreeNode&)> visit = [&](OctreeNode& node) {
    for (auto& vp : node.visual_points_) fn(vp);
    for (auto& child : node.children_) {
      if (child) visit(*child);
    }
  };
  for (const VoxelKey& key : visual_keys_) {
    auto it = table_.find(key);
    if (it != table_.end()) visit(*it->second);
  }
}

void VoxelMap::for_each_visual_point(const std::function<void(const VisualPoint&)>& fn) const {
  std::function<void(const OctreeNode&)> visit = [&](const OctreeNode& node) {
    for (const auto& vp : node.visual_points_) fn(vp);
    for (const auto& child : node.children_) {
      if (child) visit(*child);
    }
  };
  for (const VoxelKey& key : visual_keys_) {
    auto it = table_.find(key);
    if (it != table_.end()) visit(*it->second);
  }
}

void VoxelMap::export_snapshot(std::ostream& os) const {
  std::vector<VoxelKey> keys;
  keys.reserve(table_.size());
  for (const auto& [key, node] : table_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  for (const VoxelKey& key : keys) {
    const OctreeNode* root = table_.at(key).get();
    std::function<void(const OctreeNode&)> visit = [&](const OctreeNode& node) {
      if (node.plane()) {
        const PlaneFeature& pl = *node.plane();
        os << "P " << key.ix << ' ' << key.iy << ' ' << key.iz << ' ' << node.level() << ' '
           << pl.center.x() << ' ' << pl.center.y() << ' ' << pl.center.z() << ' '
           << pl.normal.x() << ' ' << pl.normal.y() << ' ' << pl.normal.z() << ' '
           << pl.point_count << '\n';
      }
      for (const auto& vp : node.visual_points()) {
        os << "V " << key.ix << ' ' << key.iy << ' ' << key.iz << ' ' << node.level() << ' '
           << vp.position.x() << ' ' << vp.position.y() << ' ' << vp.position.z() << ' '
           << vp.observation_score << '\n';
      }
      for (const auto& child : node.children()) {
        if (child) visit(*child);
      }
    };
    visit(*root);
  }
}

}  // namespace livo

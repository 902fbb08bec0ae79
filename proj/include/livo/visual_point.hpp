#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "livo/so3.hpp"

namespace livo {

constexpr int kPatchSize = 8;                              // level-0 patch is 8x8
constexpr int kPatchArea = kPatchSize * kPatchSize;
constexpr int kPyramidLevels = 3;

// Sample offset of patch pixel i (and j) from the patch center, in units of
// the level stride 2^level.
inline double patch_offset(int i) { return i - (kPatchSize - 1) * 0.5; }

// Border margin required at a pyramid level: half patch extent plus 2 px of
// slack for bilinear sampling and gradients.
inline double patch_margin(int level) {
  return (kPatchSize - 1) * 0.5 * static_cast<double>(1 << level) + 2.0;
}

struct PatchPyramid {
  std::array<std::array<float, kPatchArea>, kPyramidLevels> levels{};
};

// Map point carrying reference image patches for direct photometric
// alignment.
struct VisualPoint {
  Vector3d position = Vector3d::Zero();      // m, world
  PatchPyramid patch_pyramid;
  Pose reference_pose;                       // world-from-camera at capture
  Vector3d normal_hint = Vector3d::UnitZ();  // surface orientation, unit
  double observation_score = 0;              // image-gradient magnitude at capture
  std::int64_t last_observed = 0;            // frame index
};

}  // namespace livo

#pragma once

#include <cstdint>
#include <vector>

#include "livo/so3.hpp"

namespace livo {

struct SelectorThresholds {
  double tau_position = 1.0;                  // m
  double tau_rotation = 60.0 * M_PI / 180.0;  // rad
};

// Keyframe threshold scaled by the constraint sufficiency: sqrt(3) *
// sigma_min * tau_predefined, factor in [0, 1].
SelectorThresholds adaptive_threshold(double sigma_min, const SelectorThresholds& predefined);

struct SelectionDecision {
  bool selected = false;
  double position_delta = 0;
  double rotation_delta = 0;
};

// Keeps the last selected keyframe pose; a frame is selected when LiDAR is
// degenerate or motion since that keyframe exceeds either threshold.
class FrameSelector {
 public:
  SelectionDecision should_select(const Pose& current_pose, const SelectorThresholds& tau,
                                  bool degenerate);

  // frames_selected / frames_seen, in percent. Zero when no frames were seen.
  double selection_ratio_percent() const;

  std::int64_t frames_seen() const { return frames_seen_; }
  std::int64_t frames_selected() const { return frames_selected_; }

 private:
  bool has_keyframe_ = false;
  Pose last_keyframe_pose_;
  std::int64_t frames_seen_ = 0;
  std::int64_t frames_selected_ = 0;
};

}  // namespace livo

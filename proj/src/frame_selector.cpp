#include "livo/frame_selector.hpp"

#include <algorithm>
#include <cmath>

namespace livo {

SelectorThresholds adaptive_threshold(double sigma_min, const SelectorThresholds& predefined) {
  const double factor = std::clamp(std::sqrt(3.0) * sigma_min, 0.0, 1.0);
  return SelectorThresholds{factor * predefined.tau_position, factor * predefined.tau_rotation};
}

SelectionDecision FrameSelector::should_select(const Pose& current_pose,
                                               const SelectorThresholds& tau, bool degenerate) {
  SelectionDecision decision;
  ++frames_seen_;

  if (has_keyframe_) {
    decision.position_delta = position_delta(last_keyframe_pose_, current_pose);
    decision.rotation_delta = rotation_delta(last_keyframe_pose_, current_pose);
    decision.selected = degenerate || decision.position_delta > tau.tau_position ||
                        decision.rotation_delta > tau.tau_rotation;
  } else {
    decision.selected = true;  // first frame always starts a keyframe
  }

  if (decision.selected) {
    last_keyframe_pose_ = current_pose;
    has_keyframe_ = true;
    ++frames_selected_;
  }
  return decision;
}

double FrameSelector::selection_ratio_percent() const {
  if (frames_seen_ == 0) return 0.0;
  return 100.0 * static_cast<double>(frames_selected_) / static_cast<double>(frames_seen_);
}

}  // namespace livo

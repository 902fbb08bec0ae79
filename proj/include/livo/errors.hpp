#pragma once

#include <stdexcept>
#include <string>

namespace livo {

// IMU interval too long (or nonpositive); the caller decides whether to
// re-initialize.
struct PropagationGapError : std::runtime_error {
  explicit PropagationGapError(const std::string& what) : std::runtime_error(what) {}
};

// IMU stream does not cover the scan densely enough for motion compensation.
struct UndistortionGapError : std::runtime_error {
  explicit UndistortionGapError(const std::string& what) : std::runtime_error(what) {}
};

struct DatasetError : std::runtime_error {
  explicit DatasetError(const std::string& what) : std::runtime_error(what) {}
};

struct MetricError : std::runtime_error {
  explicit MetricError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace livo

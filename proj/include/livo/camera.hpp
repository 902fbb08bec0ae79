#pragma once

#include <vector>

#include <Eigen/Dense>

#include "livo/so3.hpp"

namespace livo {

using Eigen::Vector2d;

// Pinhole model plus the fixed IMU-from-camera extrinsic.
struct CameraModel {
  double fx = 240, fy = 240, cx = 160, cy = 120;  // px
  int width = 320, height = 240;
  Pose imu_from_camera;

  Vector2d project(const Vector3d& p_camera) const {
    return {fx * p_camera.x() / p_camera.z() + cx, fy * p_camera.y() / p_camera.z() + cy};
  }

  // d(pixel)/d(point in camera frame).
  Eigen::Matrix<double, 2, 3> projection_jacobian(const Vector3d& p_camera) const {
    const double inv_z = 1.0 / p_camera.z();
    Eigen::Matrix<double, 2, 3> j;
    j << fx * inv_z, 0, -fx * p_camera.x() * inv_z * inv_z,
         0, fy * inv_z, -fy * p_camera.y() * inv_z * inv_z;
    return j;
  }

  // Unit ray through a pixel, camera frame.
  Vector3d unproject(const Vector2d& px) const {
    return Vector3d((px.x() - cx) / fx, (px.y() - cy) / fy, 1.0).normalized();
  }

  bool in_bounds(const Vector2d& px, double margin) const {
    return px.x() >= margin && px.x() <= width - 1 - margin && px.y() >= margin &&
           px.y() <= height - 1 - margin;
  }
};

// Row-major grayscale image, intensities in [0, 1].
struct Image {
  int width = 0, height = 0;
  double timestamp = 0;
  std::vector<float> intensities;

  Image() = default;
  Image(int w, int h, double t = 0) : width(w), height(h), timestamp(t), intensities(w * h, 0.f) {}

  float at(int x, int y) const { return intensities[y * width + x]; }
  float& at(int x, int y) { return intensities[y * width + x]; }

  // Bilinear sample; caller keeps (u, v) inside [0, w-1] x [0, h-1].
  double bilinear(double u, double v) const;

  // Exact gradient of the bilinear surface; piecewise linear between pixel
  // centers, so it is the true derivative of bilinear() inside each cell.
  Vector2d bilinear_gradient(double u, double v) const;
};

}  // namespace livo

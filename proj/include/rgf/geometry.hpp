#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace rgf {

// Points with camera-frame depth at or below this are reported as behind the
// camera instead of being projected.
inline constexpr double kBehindCameraEps = 1e-6;

inline constexpr double kOrthonormalTol = 1e-9;

// Rigid-body transform: p_out = R * p_in + t. The rotation is validated at
// construction (orthonormal, det +1) so downstream code never re-checks.
class Pose3 {
 public:
  Pose3() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

  Pose3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {
    if (!is_valid_rotation(rotation)) {
      throw std::invalid_argument("Pose3: rotation must be orthonormal with det +1");
    }
  }

  static Pose3 identity() { return {}; }

  static bool is_valid_rotation(const Eigen::Matrix3d& r) {
    const double ortho_err =
        (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return ortho_err <= kOrthonormalTol && std::abs(r.determinant() - 1.0) <= kOrthonormalTol;
  }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }

  Pose3 inverse() const {
    Eigen::Matrix3d rt = rotation_.transpose();
    return Pose3(rt, -(rt * translation_));
  }

  friend bool operator==(const Pose3& a, const Pose3& b) {
    return (a.rotation_.array() == b.rotation_.array()).all() &&
           (a.translation_.array() == b.translation_.array()).all();
  }

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Result applies b first, then a.
inline Pose3 compose(const Pose3& a, const Pose3& b) {
  return Pose3(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx0 = 0.0;
  double cy0 = 0.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) {
      throw std::invalid_argument("CameraIntrinsics: focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("CameraIntrinsics: image size must be positive");
    }
    if (cx0 < 0.0 || cx0 > width || cy0 < 0.0 || cy0 > height) {
      throw std::invalid_argument("CameraIntrinsics: principal point outside image");
    }
  }

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::optional<double> radial_velocity;
  bool is_clutter = false;

  Eigen::Vector3d position() const { return {x, y, z}; }

  friend bool operator==(const RadarPoint&, const RadarPoint&) = default;
};

struct PixelPoint {
  double cx = 0.0;
  double cy = 0.0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Pinhole projection of a radar-frame point into pixel coordinates. Returns
// nullopt when the transformed point lies behind the camera. The result may
// fall outside the image rectangle; callers filter.
inline std::optional<PixelPoint> project(const RadarPoint& point, const Pose3& radar_to_camera,
                                         const CameraIntrinsics& intr) {
  const Eigen::Vector3d p_cam = radar_to_camera.apply(point.position());
  if (p_cam.z() <= kBehindCameraEps) return std::nullopt;
  return PixelPoint{intr.fx * p_cam.x() / p_cam.z() + intr.cx0,
                    intr.fy * p_cam.y() / p_cam.z() + intr.cy0};
}

}  // namespace rgf

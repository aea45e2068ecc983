#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgf/boxes.hpp"
#include "rgf/geometry.hpp"
#include "rgf/random.hpp"

namespace rgf {

// One synchronized camera+radar sample with calibration and ground truth.
// Images are optional paths: the synthetic pipeline never reads pixels.
struct Frame {
  int frame_id = 0;
  int width = 0;
  int height = 0;
  std::optional<std::string> image_path;
  std::vector<RadarPoint> radar_points;
  Pose3 radar_to_camera;
  CameraIntrinsics intrinsics;
  std::vector<GroundTruthBox> ground_truth;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct SceneGenConfig {
  int n_frames = 200;
  int objects_min = 4;
  int objects_max = 10;
  // Probability per class, indexed by ClassId; must sum to 1.
  std::array<double, kNumClasses> class_mix = {0.55, 0.20, 0.05, 0.10, 0.05, 0.05};
  double depth_min = 5.0;
  double depth_max = 120.0;
  double radar_hit_prob = 0.9;
  double radar_pos_noise_m = 0.5;
  double clutter_rate = 3.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_frames < 0) throw std::invalid_argument("SceneGenConfig: n_frames must be >= 0");
    if (objects_min < 0 || objects_max < objects_min) {
      throw std::invalid_argument("SceneGenConfig: invalid objects_per_frame range");
    }
    double sum = 0.0;
    for (double p : class_mix) {
      if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("SceneGenConfig: class_mix entries must be in [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("SceneGenConfig: class_mix must sum to 1");
    }
    if (!(depth_min > 0.0) || !(depth_max > depth_min)) {
      throw std::invalid_argument("SceneGenConfig: invalid depth_range");
    }
    if (radar_hit_prob < 0.0 || radar_hit_prob > 1.0) {
      throw std::invalid_argument("SceneGenConfig: radar_hit_prob must be in [0,1]");
    }
    if (radar_pos_noise_m < 0.0) {
      throw std::invalid_argument("SceneGenConfig: radar_pos_noise_m must be >= 0");
    }
    if (clutter_rate < 0.0) {
      throw std::invalid_argument("SceneGenConfig: clutter_rate must be >= 0");
    }
  }
};

// Canonical physical extent (width x height, meters) of the upright rectangle
// each class presents to the camera. Fixed so projected area follows a known
// 1/d^2 law.
struct ObjectDims {
  double width_m = 0.0;
  double height_m = 0.0;
};

inline ObjectDims canonical_dims(ClassId c) {
  switch (c) {
    case ClassId::car: return {4.5, 1.8};
    case ClassId::truck: return {6.4, 2.4};
    case ClassId::bus: return {5.5, 2.8};
    case ClassId::pedestrian: return {0.6, 1.7};
    case ClassId::bicycle: return {1.6, 1.2};
    case ClassId::motorcycle: return {1.8, 1.3};
  }
  return {1.0, 1.0};
}

// Fixed radar mount used by the generator: radar x forward / y left / z up,
// camera x right / y down / z forward, with a small translation offset.
inline Pose3 default_radar_to_camera() {
  Eigen::Matrix3d r;
  r << 0.0, -1.0, 0.0,
       0.0, 0.0, -1.0,
       1.0, 0.0, 0.0;
  return Pose3(r, Eigen::Vector3d(0.0, -0.3, 0.2));
}

namespace detail {

inline ClassId sample_class(KeyedStream& stream, const std::array<double, kNumClasses>& mix) {
  const double u = stream.uniform();
  double cum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    cum += mix[c];
    if (u < cum) return static_cast<ClassId>(c);
  }
  return static_cast<ClassId>(kNumClasses - 1);
}

}  // namespace detail

// Deterministic synthetic scene: objects placed uniformly in the camera
// frustum within the depth range, ground-truth 2D boxes are the exact pinhole
// projection of each object's upright 3D rectangle, and each object emits a
// radar return with probability radar_hit_prob at its 3D centroid plus
// Gaussian noise. Clutter returns are Poisson-distributed and flagged.
inline std::vector<Frame> generate_scene(const SceneGenConfig& cfg,
                                         const CameraIntrinsics& camera) {
  cfg.validate();
  camera.validate();
  const Pose3 radar_to_camera = default_radar_to_camera();
  const Pose3 camera_to_radar = radar_to_camera.inverse();

  std::vector<Frame> frames;
  frames.reserve(cfg.n_frames);
  for (int f = 0; f < cfg.n_frames; ++f) {
    Frame frame;
    frame.frame_id = f;
    frame.width = camera.width;
    frame.height = camera.height;
    frame.intrinsics = camera;
    frame.radar_to_camera = radar_to_camera;

    KeyedStream frame_stream({cfg.seed, static_cast<std::uint64_t>(f), 0});
    const int n_objects =
        static_cast<int>(frame_stream.uniform_int(cfg.objects_min, cfg.objects_max));

    for (int i = 0; i < n_objects; ++i) {
      KeyedStream obj({cfg.seed, static_cast<std::uint64_t>(f), 1,
                       static_cast<std::uint64_t>(i)});
      const ClassId cls = detail::sample_class(obj, cfg.class_mix);
      const ObjectDims dims = canonical_dims(cls);

      // Nearest depth at which the projected box still fits in the image.
      const double fit_depth = std::max(camera.fx * dims.width_m / camera.width,
                                        camera.fy * dims.height_m / camera.height) *
                               1.02;
      const double depth_lo = std::max(cfg.depth_min, fit_depth);
      if (depth_lo >= cfg.depth_max) {
        throw std::invalid_argument("SceneGenConfig: depth_range too shallow for class " +
                                    std::string(class_name(cls)));
      }

      GroundTruthBox gt;
      gt.class_id = cls;
      double depth = 0.0;
      double u = 0.0, v = 0.0, half_w = 0.0, half_h = 0.0;
      // Rejection step keeps generated objects from stacking on top of each
      // other; bounded so per-frame counts always match the config.
      for (int attempt = 0; attempt < 100; ++attempt) {
        depth = obj.uniform(depth_lo, cfg.depth_max);
        half_w = 0.5 * camera.fx * dims.width_m / depth;
        half_h = 0.5 * camera.fy * dims.height_m / depth;
        u = obj.uniform(half_w, camera.width - half_w);
        v = obj.uniform(half_h, camera.height - half_h);
        gt.x0 = u - half_w;
        gt.y0 = v - half_h;
        gt.x1 = u + half_w;
        gt.y1 = v + half_h;
        bool overlaps = false;
        for (const GroundTruthBox& other : frame.ground_truth) {
          if (iou(gt.box(), other.box()) >= 0.3) {
            overlaps = true;
            break;
          }
        }
        if (!overlaps) break;
      }
      frame.ground_truth.push_back(gt);

      if (obj.uniform() < cfg.radar_hit_prob) {
        const Eigen::Vector3d centroid_cam{(u - camera.cx0) * depth / camera.fx,
                                           (v - camera.cy0) * depth / camera.fy, depth};
        Eigen::Vector3d p_radar = camera_to_radar.apply(centroid_cam);
        RadarPoint rp;
        rp.x = p_radar.x() + obj.gaussian() * cfg.radar_pos_noise_m;
        rp.y = p_radar.y() + obj.gaussian() * cfg.radar_pos_noise_m;
        rp.z = p_radar.z() + obj.gaussian() * cfg.radar_pos_noise_m;
        rp.radial_velocity = obj.gaussian() * 5.0;
        rp.is_clutter = false;
        frame.radar_points.push_back(rp);
      }
    }

    KeyedStream clutter({cfg.seed, static_cast<std::uint64_t>(f), 2});
    const int n_clutter = clutter.poisson(cfg.clutter_rate);
    for (int k = 0; k < n_clutter; ++k) {
      const double depth = clutter.uniform(cfg.depth_min, cfg.depth_max);
      const double px = clutter.uniform(0.0, camera.width);
      const double py = clutter.uniform(0.0, camera.height);
      const Eigen::Vector3d p_cam{(px - camera.cx0) * depth / camera.fx,
                                  (py - camera.cy0) * depth / camera.fy, depth};
      const Eigen::Vector3d p_radar = camera_to_radar.apply(p_cam);
      RadarPoint rp;
      rp.x = p_radar.x();
      rp.y = p_radar.y();
      rp.z = p_radar.z();
      rp.is_clutter = true;
      frame.radar_points.push_back(rp);
    }

    frames.push_back(std::move(frame));
  }
  return frames;
}

// Camera and generator settings for the bundled reference scene (seed 42).
// Tuned so a visible share of objects sit below the primary detector's
// detectable area at full-image scale while exceeding it inside a 240 px ROI.
inline CameraIntrinsics reference_camera() {
  return CameraIntrinsics{1000.0, 1000.0, 640.0, 360.0, 1280, 720};
}

inline SceneGenConfig reference_scene_config() {
  SceneGenConfig cfg;
  cfg.n_frames = 200;
  cfg.objects_min = 4;
  cfg.objects_max = 10;
  cfg.class_mix = {0.50, 0.30, 0.04, 0.08, 0.04, 0.04};
  cfg.depth_min = 8.0;
  cfg.depth_max = 85.0;
  cfg.radar_hit_prob = 0.9;
  cfg.radar_pos_noise_m = 1.0;
  cfg.clutter_rate = 3.0;
  cfg.seed = 42;
  return cfg;
}

}  // namespace rgf

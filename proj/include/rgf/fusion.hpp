#pragma once

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "rgf/detector.hpp"
#include "rgf/radar_proposals.hpp"
#include "rgf/scene.hpp"

namespace rgf {

struct FusionConfig {
  int primary_input_size = 416;
  int secondary_input_size = 300;
  int roi_size = 240;
  double nms_iou = 0.45;
  double score_floor = 0.05;
  bool class_agnostic_nms = false;
  int max_proposals = 64;
  std::optional<double> dedup_iou;
};

struct FusedFrameResult {
  std::vector<Detection> detections;
  int n_rois = 0;
  int primary_count = 0;
  int secondary_count = 0;
  int suppressed_count = 0;
};

namespace detail {

// Total order on detections so NMS output never depends on input order.
inline bool nms_before(const Detection& a, const Detection& b) {
  const double area_a = area(a.box());
  const double area_b = area(b.box());
  return std::tie(b.score, area_b, a.x0, a.y0, a.x1, a.y1, a.class_id) <
         std::tie(a.score, area_a, b.x0, b.y0, b.x1, b.y1, b.class_id);
}

}  // namespace detail

// Greedy NMS: boxes visited by (score desc, area desc, coordinates asc); a
// box is dropped when it overlaps an already-kept box of the same class (or
// any kept box when class_aware is false) at or above the threshold.
inline std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold,
                                  bool class_aware = true) {
  std::sort(dets.begin(), dets.end(), detail::nms_before);
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (class_aware && k.class_id != d.class_id) continue;
      if (iou(d.box(), k.box()) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

// Maps a detection from detector-input coordinates of a scaled region back to
// full-image coordinates: uniform inverse scale, translate by the region
// origin, clip to image bounds. Regions are padded to square before scaling,
// so a single scale factor is exact. Returns nullopt if clipping leaves a
// degenerate box.
inline std::optional<Detection> remap_region_to_frame(const Detection& det, const Box& region,
                                                      int detector_input_size, int image_width,
                                                      int image_height) {
  const double scale = std::max(region.width(), region.height()) / detector_input_size;
  Detection out = det;
  out.x0 = std::clamp(det.x0 * scale + region.x0, 0.0, static_cast<double>(image_width));
  out.x1 = std::clamp(det.x1 * scale + region.x0, 0.0, static_cast<double>(image_width));
  out.y0 = std::clamp(det.y0 * scale + region.y0, 0.0, static_cast<double>(image_height));
  out.y1 = std::clamp(det.y1 * scale + region.y0, 0.0, static_cast<double>(image_height));
  if (out.x1 - out.x0 <= 0.0 || out.y1 - out.y0 <= 0.0) return std::nullopt;
  return out;
}

inline std::optional<Detection> remap_to_frame(const Detection& det, const RoiProposal& roi,
                                               int secondary_input_size, int image_width,
                                               int image_height) {
  return remap_region_to_frame(det, roi.box(), secondary_input_size, image_width, image_height);
}

// Full-frame fusion pass: primary detector on the whole image, secondary
// detector on every radar ROI, everything remapped to image coordinates,
// score-floored, then NMS. ROIs carry no cross-ROI context, so the result is
// independent of their processing order.
inline FusedFrameResult fuse_frame(const Frame& frame, const Detector& primary,
                                   const Detector& secondary, const FusionConfig& cfg,
                                   std::vector<DetectorInvocation>* trace = nullptr) {
  FusedFrameResult result;
  FrameContext ctx;
  ctx.frame_id = frame.frame_id;
  ctx.width = frame.width;
  ctx.height = frame.height;
  ctx.ground_truth = &frame.ground_truth;
  if (frame.image_path) ctx.image_path = &*frame.image_path;

  std::vector<Detection> pool;

  const Box full_image{0.0, 0.0, static_cast<double>(frame.width),
                       static_cast<double>(frame.height)};
  std::vector<Detection> primary_raw = primary.detect(ctx, full_image, cfg.primary_input_size);
  if (trace != nullptr) {
    trace->push_back(DetectorInvocation{full_image, cfg.primary_input_size, primary_raw,
                                        primary.flops(cfg.primary_input_size)});
  }
  for (const Detection& d : primary_raw) {
    if (d.score < cfg.score_floor) continue;
    if (auto remapped = remap_region_to_frame(d, full_image, cfg.primary_input_size, frame.width,
                                              frame.height)) {
      pool.push_back(*remapped);
      ++result.primary_count;
    }
  }

  std::vector<PixelPoint> projected;
  projected.reserve(frame.radar_points.size());
  for (const RadarPoint& rp : frame.radar_points) {
    if (auto px = project(rp, frame.radar_to_camera, frame.intrinsics)) {
      projected.push_back(*px);
    }
  }
  ProposalConfig pcfg{cfg.roi_size, cfg.max_proposals, cfg.dedup_iou};
  const std::vector<RoiProposal> proposals =
      make_proposals(projected, frame.width, frame.height, pcfg);
  result.n_rois = static_cast<int>(proposals.size());

  for (const RoiProposal& roi : proposals) {
    std::vector<Detection> secondary_raw =
        secondary.detect(ctx, roi.box(), cfg.secondary_input_size);
    if (trace != nullptr) {
      trace->push_back(DetectorInvocation{roi.box(), cfg.secondary_input_size, secondary_raw,
                                          secondary.flops(cfg.secondary_input_size)});
    }
    for (const Detection& d : secondary_raw) {
      if (d.score < cfg.score_floor) continue;
      if (auto remapped =
              remap_to_frame(d, roi, cfg.secondary_input_size, frame.width, frame.height)) {
        pool.push_back(*remapped);
        ++result.secondary_count;
      }
    }
  }

  result.detections = nms(std::move(pool), cfg.nms_iou, !cfg.class_agnostic_nms);
  result.suppressed_count =
      result.primary_count + result.secondary_count - static_cast<int>(result.detections.size());
  return result;
}

// Baseline: primary detector only, no radar proposals.
inline FusedFrameResult primary_only_frame(const Frame& frame, const Detector& primary,
                                           const FusionConfig& cfg,
                                           std::vector<DetectorInvocation>* trace = nullptr) {
  Frame no_radar = frame;
  no_radar.radar_points.clear();
  // Secondary is never invoked on a frame without radar points.
  return fuse_frame(no_radar, primary, primary, cfg, trace);
}

}  // namespace rgf

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "rgf/boxes.hpp"
#include "rgf/geometry.hpp"

namespace rgf {

// Square crop region in full-image pixel coordinates, inclusive-exclusive.
struct RoiProposal {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int source_point_index = -1;

  Box box() const {
    return {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1),
            static_cast<double>(y1)};
  }

  friend bool operator==(const RoiProposal&, const RoiProposal&) = default;
};

struct ProposalConfig {
  int roi_size = 240;
  int max_proposals = 64;
  // Greedy IoU dedup of overlapping proposals; disabled by default so every
  // radar point yields its own stand-alone proposal.
  std::optional<double> dedup_iou;
};

// Greedy scan in input order; drops a proposal whose IoU with any retained
// proposal reaches the threshold. Order is stable.
inline std::vector<RoiProposal> dedup_proposals(const std::vector<RoiProposal>& proposals,
                                                double iou_threshold) {
  std::vector<RoiProposal> kept;
  kept.reserve(proposals.size());
  for (const RoiProposal& p : proposals) {
    bool duplicate = false;
    for (const RoiProposal& k : kept) {
      if (iou(p.box(), k.box()) >= iou_threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(p);
  }
  return kept;
}

// One fixed-size square proposal per in-image point, centered at the rounded
// point location and shifted (not shrunk) to lie fully inside the image. If
// roi_size exceeds an image dimension the proposal is clipped to it. Output
// follows input order; after optional dedup the list is truncated to
// max_proposals.
inline std::vector<RoiProposal> make_proposals(const std::vector<PixelPoint>& points,
                                               int image_width, int image_height,
                                               const ProposalConfig& cfg) {
  std::vector<RoiProposal> proposals;
  proposals.reserve(points.size());
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const PixelPoint& p = points[i];
    if (p.cx < 0.0 || p.cx > image_width || p.cy < 0.0 || p.cy > image_height) continue;
    const int cx = static_cast<int>(std::llround(p.cx));
    const int cy = static_cast<int>(std::llround(p.cy));
    RoiProposal roi;
    roi.source_point_index = i;
    if (cfg.roi_size >= image_width) {
      roi.x0 = 0;
      roi.x1 = image_width;
    } else {
      roi.x0 = std::clamp(cx - cfg.roi_size / 2, 0, image_width - cfg.roi_size);
      roi.x1 = roi.x0 + cfg.roi_size;
    }
    if (cfg.roi_size >= image_height) {
      roi.y0 = 0;
      roi.y1 = image_height;
    } else {
      roi.y0 = std::clamp(cy - cfg.roi_size / 2, 0, image_height - cfg.roi_size);
      roi.y1 = roi.y0 + cfg.roi_size;
    }
    proposals.push_back(roi);
  }
  if (cfg.dedup_iou) proposals = dedup_proposals(proposals, *cfg.dedup_iou);
  if (static_cast<int>(proposals.size()) > cfg.max_proposals) {
    proposals.resize(cfg.max_proposals);
  }
  return proposals;
}

}  // namespace rgf

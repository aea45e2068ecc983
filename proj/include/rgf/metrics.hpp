#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rgf/boxes.hpp"
#include "rgf/fusion.hpp"

namespace rgf {

inline constexpr int kAreaBuckets = 8;
inline constexpr double kSmallAreaCut = 1000.0;

// Log-uniform bucket edges over [10^1.5, 10^5] px^2; areas outside the range
// land in the end buckets.
inline std::array<double, kAreaBuckets + 1> area_bucket_edges() {
  std::array<double, kAreaBuckets + 1> edges{};
  for (int i = 0; i <= kAreaBuckets; ++i) {
    edges[i] = std::pow(10.0, 1.5 + (5.0 - 1.5) * i / kAreaBuckets);
  }
  return edges;
}

inline int area_bucket_index(double area_px) {
  const auto edges = area_bucket_edges();
  for (int i = 1; i < kAreaBuckets; ++i) {
    if (area_px < edges[i]) return i - 1;
  }
  return kAreaBuckets - 1;
}

struct MetricsReport {
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  double recall = 0.0;
  double precision = 0.0;
  std::vector<double> per_frame_recall;
  std::array<long, kAreaBuckets> tp_by_area_bucket{};
  long tp_below_small_cut = 0;  // matched ground truth with area < 1000 px^2
};

struct MatchResult {
  // One entry per detection: matched ground-truth index, or nullopt.
  std::vector<std::optional<int>> det_to_gt;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

// Greedy matching in descending score order. Each detection takes the
// highest-IoU unmatched same-class ground truth with IoU >= threshold.
// Occluded ground truths are excluded from matching and from the counts.
// Ties break by detection index, then ground-truth index, ascending.
inline MatchResult match_detections(const std::vector<Detection>& dets,
                                    const std::vector<GroundTruthBox>& gts,
                                    double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    throw std::invalid_argument("match_detections: iou_threshold must be in (0,1]");
  }
  MatchResult result;
  result.det_to_gt.assign(dets.size(), std::nullopt);

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });

  std::vector<bool> gt_taken(gts.size(), false);
  int eligible_gts = 0;
  for (const GroundTruthBox& g : gts) {
    if (!g.occluded) ++eligible_gts;
  }

  for (int di : order) {
    const Detection& d = dets[di];
    double best_iou = 0.0;
    int best_gt = -1;
    for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi) {
      const GroundTruthBox& g = gts[gi];
      if (g.occluded || gt_taken[gi] || g.class_id != d.class_id) continue;
      const double overlap = iou(d.box(), g.box());
      if (overlap >= iou_threshold && overlap > best_iou) {
        best_iou = overlap;
        best_gt = gi;
      }
    }
    if (best_gt >= 0) {
      gt_taken[best_gt] = true;
      result.det_to_gt[di] = best_gt;
      ++result.true_positives;
    } else {
      ++result.false_positives;
    }
  }
  result.false_negatives = eligible_gts - result.true_positives;
  return result;
}

// Ground truth for one frame, paired with its id so evaluation can verify
// alignment with the detection results.
struct FrameGroundTruth {
  int frame_id = 0;
  const std::vector<GroundTruthBox>* boxes = nullptr;
};

struct FrameDetections {
  int frame_id = 0;
  const std::vector<Detection>* detections = nullptr;
};

inline MetricsReport evaluate(const std::vector<FrameDetections>& results,
                              const std::vector<FrameGroundTruth>& ground_truth,
                              double iou_threshold) {
  if (results.size() != ground_truth.size()) {
    throw std::invalid_argument("evaluate: frame counts do not align");
  }
  MetricsReport report;
  for (std::size_t f = 0; f < results.size(); ++f) {
    if (results[f].frame_id != ground_truth[f].frame_id) {
      throw std::invalid_argument("evaluate: mismatched frame ids");
    }
    const auto& dets = *results[f].detections;
    const auto& gts = *ground_truth[f].boxes;
    const MatchResult match = match_detections(dets, gts, iou_threshold);
    report.true_positives += match.true_positives;
    report.false_positives += match.false_positives;
    report.false_negatives += match.false_negatives;

    const int frame_total = match.true_positives + match.false_negatives;
    report.per_frame_recall.push_back(
        frame_total > 0 ? static_cast<double>(match.true_positives) / frame_total : 1.0);

    for (std::size_t di = 0; di < dets.size(); ++di) {
      if (!match.det_to_gt[di]) continue;
      const double gt_area = gts[*match.det_to_gt[di]].area();
      ++report.tp_by_area_bucket[area_bucket_index(gt_area)];
      if (gt_area < kSmallAreaCut) ++report.tp_below_small_cut;
    }
  }
  const long denom_r = report.true_positives + report.false_negatives;
  const long denom_p = report.true_positives + report.false_positives;
  report.recall = denom_r > 0 ? static_cast<double>(report.true_positives) / denom_r : 0.0;
  report.precision = denom_p > 0 ? static_cast<double>(report.true_positives) / denom_p : 0.0;
  return report;
}

}  // namespace rgf

#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rgf/cost_model.hpp"
#include "rgf/detector.hpp"
#include "rgf/fusion.hpp"
#include "rgf/metrics.hpp"
#include "rgf/scene.hpp"

namespace rgf {

enum class RunMode { fusion, primary_only };

struct DetectorSpec {
  std::string name = "yolov3-spp";
  int input_size = 416;
};

// Everything one evaluation run needs besides the frames themselves.
struct RunSpec {
  DetectorSpec primary{"yolov3-spp", 416};
  DetectorSpec secondary{"ssdlite", 300};
  FusionConfig fusion;
  double match_iou = 0.4;
  EnergyParams energy;
  bool energy_per_frame_mode = false;
  RunMode mode = RunMode::fusion;
  DetectorProfile profile;
  int threads = 1;
};

struct RunOutputs {
  std::vector<int> frame_ids;
  std::vector<FusedFrameResult> frame_results;
  MetricsReport metrics;
  CostReport cost;
};

namespace detail {

inline const char* mode_name(RunMode m) {
  return m == RunMode::fusion ? "fusion" : "primary-only";
}

template <typename Fn>
void parallel_frames(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(threads, static_cast<int>(n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Runs fusion (or the primary-only baseline) over every frame and aggregates
// metrics and cost. Frames are independent, so they may be evaluated in
// parallel; results are stored by frame index, making the aggregate identical
// to sequential execution.
inline RunOutputs run_evaluate(const std::vector<Frame>& frames, const RunSpec& spec,
                               const FlopsCatalog& catalog) {
  DetectorProfile profile = spec.profile;
  const SyntheticDetector primary(profile, spec.primary.name, catalog);
  const SyntheticDetector secondary(profile, spec.secondary.name, catalog);
  const double cl_primary = catalog.flops_for(spec.primary.name, spec.primary.input_size);
  const double cl_secondary = catalog.flops_for(spec.secondary.name, spec.secondary.input_size);

  FusionConfig fusion_cfg = spec.fusion;
  fusion_cfg.primary_input_size = spec.primary.input_size;
  fusion_cfg.secondary_input_size = spec.secondary.input_size;

  RunOutputs out;
  out.frame_results.resize(frames.size());
  out.frame_ids.resize(frames.size());

  // Detectors that cannot run concurrently force sequential evaluation.
  const int threads =
      (primary.exclusive() || secondary.exclusive()) ? 1 : std::max(1, spec.threads);

  detail::parallel_frames(frames.size(), threads, [&](std::size_t i) {
    const Frame& frame = frames[i];
    out.frame_ids[i] = frame.frame_id;
    out.frame_results[i] = spec.mode == RunMode::fusion
                               ? fuse_frame(frame, primary, secondary, fusion_cfg)
                               : primary_only_frame(frame, primary, fusion_cfg);
  });

  std::vector<FrameDetections> dets;
  std::vector<FrameGroundTruth> gts;
  std::vector<int> n_rois;
  dets.reserve(frames.size());
  gts.reserve(frames.size());
  n_rois.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    dets.push_back({frames[i].frame_id, &out.frame_results[i].detections});
    gts.push_back({frames[i].frame_id, &frames[i].ground_truth});
    n_rois.push_back(out.frame_results[i].n_rois);
  }
  out.metrics = evaluate(dets, gts, spec.match_iou);
  out.cost =
      make_cost_report(cl_primary, cl_secondary, n_rois, spec.energy, spec.energy_per_frame_mode);
  return out;
}

inline nlohmann::json metrics_to_json(const RunOutputs& out, const RunSpec& spec) {
  nlohmann::json j;
  j["mode"] = detail::mode_name(spec.mode);
  j["primary"] = {{"name", spec.primary.name}, {"input_size", spec.primary.input_size}};
  j["secondary"] = {{"name", spec.secondary.name}, {"input_size", spec.secondary.input_size}};
  j["roi_size"] = spec.fusion.roi_size;
  j["match_iou"] = spec.match_iou;
  j["true_positives"] = out.metrics.true_positives;
  j["false_positives"] = out.metrics.false_positives;
  j["false_negatives"] = out.metrics.false_negatives;
  j["recall"] = out.metrics.recall;
  j["precision"] = out.metrics.precision;
  j["per_frame_recall"] = out.metrics.per_frame_recall;
  const auto edges = area_bucket_edges();
  j["area_bucket_edges"] = std::vector<double>(edges.begin(), edges.end());
  j["tp_by_area_bucket"] =
      std::vector<long>(out.metrics.tp_by_area_bucket.begin(), out.metrics.tp_by_area_bucket.end());
  j["tp_below_1000px2"] = out.metrics.tp_below_small_cut;
  j["mean_gflops"] = out.cost.mean_gflops;
  j["mean_energy_j"] = out.cost.mean_energy_j;
  j["cl_primary_gflops"] = out.cost.cl_primary;
  j["cl_secondary_gflops"] = out.cost.cl_secondary;
  return j;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace detail

inline std::string per_frame_csv(const RunOutputs& out) {
  std::ostringstream csv;
  csv << "frame_id,recall,n_rois,gflops\n";
  for (std::size_t i = 0; i < out.frame_ids.size(); ++i) {
    csv << out.frame_ids[i] << "," << detail::fmt_double(out.metrics.per_frame_recall[i]) << ","
        << out.frame_results[i].n_rois << "," << detail::fmt_double(out.cost.per_frame_gflops[i])
        << "\n";
  }
  return csv.str();
}

inline std::string cost_csv(const RunOutputs& out, const RunSpec& spec) {
  std::ostringstream csv;
  csv << "frame_id,n_rois,gflops,energy_j\n";
  for (std::size_t i = 0; i < out.frame_ids.size(); ++i) {
    const double g = out.cost.per_frame_gflops[i];
    csv << out.frame_ids[i] << "," << out.frame_results[i].n_rois << ","
        << detail::fmt_double(g) << ","
        << detail::fmt_double(frame_energy(spec.energy, g, spec.energy_per_frame_mode)) << "\n";
  }
  return csv.str();
}

// Summary row shaped like the evaluation tables:
// mode, primary, secondary, recall, precision, FN, energy, GFLOPs.
inline std::string summary_row(const RunOutputs& out, const RunSpec& spec) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-13s %-16s %-16s Rcll %.3f  Prcn %.3f  FN %ld  TE %.3f  GF %.1f",
                detail::mode_name(spec.mode),
                (spec.primary.name + "(" + std::to_string(spec.primary.input_size) + ")").c_str(),
                spec.mode == RunMode::fusion
                    ? (spec.secondary.name + "(" + std::to_string(spec.secondary.input_size) + ")")
                          .c_str()
                    : "-",
                out.metrics.recall, out.metrics.precision, out.metrics.false_negatives,
                out.cost.mean_energy_j, out.cost.mean_gflops);
  return buf;
}

inline void write_reports(const RunOutputs& out, const RunSpec& spec,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir / "metrics.json");
    f << metrics_to_json(out, spec).dump(2) << "\n";
  }
  {
    std::ofstream f(out_dir / "per_frame.csv");
    f << per_frame_csv(out);
  }
  {
    std::ofstream f(out_dir / "cost.csv");
    f << cost_csv(out, spec);
  }
}

enum class SweepAxis { roi_size, secondary_input_size };

struct SweepPoint {
  int value = 0;
  double recall = 0.0;
  double mean_gflops = 0.0;
};

// One evaluation per value with all other settings fixed, sorted by value.
inline std::vector<SweepPoint> run_sweep(const std::vector<Frame>& frames, const RunSpec& base,
                                         const FlopsCatalog& catalog, SweepAxis axis,
                                         std::vector<int> values) {
  if (values.empty()) throw std::invalid_argument("run_sweep: values must be nonempty");
  std::sort(values.begin(), values.end());
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (int value : values) {
    RunSpec spec = base;
    if (axis == SweepAxis::roi_size) {
      spec.fusion.roi_size = value;
    } else {
      spec.secondary.input_size = value;
    }
    const RunOutputs out = run_evaluate(frames, spec, catalog);
    points.push_back({value, out.metrics.recall, out.cost.mean_gflops});
  }
  return points;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream csv;
  csv << "value,recall,mean_gflops\n";
  for (const SweepPoint& p : points) {
    csv << p.value << "," << detail::fmt_double(p.recall) << ","
        << detail::fmt_double(p.mean_gflops) << "\n";
  }
  return csv.str();
}

}  // namespace rgf

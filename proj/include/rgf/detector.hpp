#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rgf/boxes.hpp"
#include "rgf/flops_catalog.hpp"
#include "rgf/random.hpp"

namespace rgf {

// Behavioral parameters of the synthetic detector. The detection probability
// is a linear ramp in effective pixel area (the object's area after the
// region is rescaled to the detector input), zeroed when too little of the
// object is visible in the region.
struct DetectorProfile {
  int input_size = 300;
  double p_max = 0.98;
  double area_lo = 400.0;
  double area_hi = 4000.0;
  double visibility_min = 0.25;
  double loc_noise_frac = 0.03;
  double false_positive_rate = 0.0;
  std::uint64_t seed = 0;
};

// Everything a detector may look at for one frame. The synthetic detector
// reads ground truth; real backends would read pixels via image_path.
struct FrameContext {
  int frame_id = 0;
  int width = 0;
  int height = 0;
  const std::vector<GroundTruthBox>* ground_truth = nullptr;
  const std::string* image_path = nullptr;
};

// One detector call, for cost accounting and traces.
struct DetectorInvocation {
  Box region;
  int input_size = 0;
  std::vector<Detection> detections;
  double flops = 0.0;
};

class Detector {
 public:
  virtual ~Detector() = default;

  // Detections are expressed in detector-input coordinates: the region padded
  // to square and scaled to input_size x input_size.
  virtual std::vector<Detection> detect(const FrameContext& ctx, const Box& region,
                                        int input_size) const = 0;

  virtual double flops(int input_size) const = 0;

  virtual const std::string& name() const = 0;

  // Backends that cannot be invoked concurrently declare this; the pipeline
  // then serializes calls.
  virtual bool exclusive() const { return false; }
};

// Probability that a detector with the given profile finds gt_box when shown
// region_bounds scaled to input_size. Zero if less than visibility_min of the
// object is inside the region, otherwise a linear ramp in effective area.
inline double detection_probability(const Box& gt_box, const Box& region_bounds, int input_size,
                                    const DetectorProfile& profile) {
  const double gt_area = area(gt_box);
  if (gt_area <= 0.0) return 0.0;
  const double inter = intersection_area(gt_box, region_bounds);
  const double visibility = inter / gt_area;
  if (visibility < profile.visibility_min) return 0.0;
  const double scale =
      input_size / std::max(region_bounds.width(), region_bounds.height());
  const double a_eff = inter * scale * scale;
  const double ramp =
      std::clamp((a_eff - profile.area_lo) / (profile.area_hi - profile.area_lo), 0.0, 1.0);
  return profile.p_max * ramp;
}

// Deterministic stand-in for a neural detector. All randomness is drawn from
// counter-based streams keyed by (seed, frame id, region bounds, object), so
// results are identical regardless of call order or thread.
class SyntheticDetector : public Detector {
 public:
  SyntheticDetector(DetectorProfile profile, std::string catalog_name, FlopsCatalog catalog)
      : profile_(profile), name_(std::move(catalog_name)), catalog_(std::move(catalog)) {}

  const DetectorProfile& profile() const { return profile_; }
  const std::string& name() const override { return name_; }

  double flops(int input_size) const override { return catalog_.flops_for(name_, input_size); }

  std::vector<Detection> detect(const FrameContext& ctx, const Box& region,
                                int input_size) const override {
    std::vector<Detection> out;
    const double region_side = std::max(region.width(), region.height());
    if (region_side <= 0.0) return out;
    const double scale = input_size / region_side;
    const std::uint64_t region_key = region_stream_key(ctx.frame_id, region);

    if (ctx.ground_truth != nullptr) {
      for (std::size_t i = 0; i < ctx.ground_truth->size(); ++i) {
        const GroundTruthBox& gt = (*ctx.ground_truth)[i];
        const double p = detection_probability(gt.box(), region, input_size, profile_);
        if (p <= 0.0) continue;
        KeyedStream stream({profile_.seed, region_key, static_cast<std::uint64_t>(i)});
        if (stream.uniform() >= p) continue;

        // Visible part of the object in input coordinates.
        Box b{(std::max(gt.x0, region.x0) - region.x0) * scale,
              (std::max(gt.y0, region.y0) - region.y0) * scale,
              (std::min(gt.x1, region.x1) - region.x0) * scale,
              (std::min(gt.y1, region.y1) - region.y0) * scale};
        if (profile_.loc_noise_frac > 0.0) {
          const double dx = stream.gaussian() * profile_.loc_noise_frac * (b.x1 - b.x0);
          const double dy = stream.gaussian() * profile_.loc_noise_frac * (b.y1 - b.y0);
          b.x0 += dx;
          b.x1 += dx;
          b.y0 += dy;
          b.y1 += dy;
        }
        b.x0 = std::clamp(b.x0, 0.0, static_cast<double>(input_size));
        b.x1 = std::clamp(b.x1, 0.0, static_cast<double>(input_size));
        b.y0 = std::clamp(b.y0, 0.0, static_cast<double>(input_size));
        b.y1 = std::clamp(b.y1, 0.0, static_cast<double>(input_size));
        if (b.x1 - b.x0 <= 0.0 || b.y1 - b.y0 <= 0.0) continue;

        out.push_back(Detection{b.x0, b.y0, b.x1, b.y1, gt.class_id,
                                std::clamp(p, 0.05, 1.0)});
      }
    }

    if (profile_.false_positive_rate > 0.0) {
      KeyedStream fp_stream({profile_.seed, region_key, 0xfa15ede7ull});
      const int n_fp = fp_stream.poisson(profile_.false_positive_rate);
      for (int k = 0; k < n_fp; ++k) {
        const double w = fp_stream.uniform(8.0, input_size / 4.0);
        const double h = fp_stream.uniform(8.0, input_size / 4.0);
        const double x0 = fp_stream.uniform(0.0, input_size - w);
        const double y0 = fp_stream.uniform(0.0, input_size - h);
        const ClassId cls = static_cast<ClassId>(fp_stream.uniform_int(0, kNumClasses - 1));
        out.push_back(Detection{x0, y0, x0 + w, y0 + h, cls, fp_stream.uniform(0.05, 0.5)});
      }
    }
    return out;
  }

 private:
  // Keyed by region geometry rather than call order, so permuting the ROI
  // list cannot change per-region draws.
  static std::uint64_t region_stream_key(int frame_id, const Box& region) {
    std::uint64_t h = hash_combine(0x7e91045ull, static_cast<std::uint64_t>(frame_id));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(region.x0));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(region.y0));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(region.x1));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(region.y1));
    return h;
  }

  DetectorProfile profile_;
  std::string name_;
  FlopsCatalog catalog_;
};

}  // namespace rgf

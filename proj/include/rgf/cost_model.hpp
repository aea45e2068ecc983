#pragma once

#include <stdexcept>
#include <vector>

namespace rgf {

// Per-frame energy accounting constants: camera capture, radar capture,
// transfer cost per Mb, combined frame size, frame rate, and accelerator
// efficiency.
struct EnergyParams {
  double alpha_j_per_frame = 0.020;
  double beta_j_per_frame = 0.92;
  double gamma_j_per_mb = 0.0039;
  double frame_size_mb = 34.5;
  double fps = 20.0;
  double ee_hw_tops_per_w = 3.08;

  void validate() const {
    if (!(alpha_j_per_frame > 0.0) || !(beta_j_per_frame > 0.0) || !(gamma_j_per_mb > 0.0) ||
        !(frame_size_mb > 0.0) || !(fps > 0.0) || !(ee_hw_tops_per_w > 0.0)) {
      throw std::invalid_argument("EnergyParams: all parameters must be positive");
    }
  }
};

// Total compute for one frame: full-image primary pass plus one secondary
// pass per ROI.
inline double frame_gflops(double cl_primary, double cl_secondary, int n_rois) {
  if (n_rois < 0) throw std::invalid_argument("frame_gflops: n_rois must be >= 0");
  return cl_primary + cl_secondary * n_rois;
}

// Energy per the accounting convention: sensor capture + transfer +
// compute * fps / efficiency. The compute term dimensionally yields watts but
// is reported as J/frame; it is kept as written. per_frame_mode drops the fps
// factor for sensitivity studies.
inline double frame_energy(const EnergyParams& params, double total_gflops,
                           bool per_frame_mode = false) {
  params.validate();
  const double sensor_and_transfer = params.alpha_j_per_frame + params.beta_j_per_frame +
                                     params.gamma_j_per_mb * params.frame_size_mb;
  const double rate = per_frame_mode ? 1.0 : params.fps;
  const double compute =
      total_gflops * 1e9 * rate / (params.ee_hw_tops_per_w * 1e12);
  return sensor_and_transfer + compute;
}

struct CostReport {
  std::vector<double> per_frame_gflops;
  double mean_gflops = 0.0;
  double mean_energy_j = 0.0;
  double cl_primary = 0.0;
  double cl_secondary = 0.0;
};

inline CostReport make_cost_report(double cl_primary, double cl_secondary,
                                   const std::vector<int>& n_rois_per_frame,
                                   const EnergyParams& params, bool per_frame_mode = false) {
  CostReport report;
  report.cl_primary = cl_primary;
  report.cl_secondary = cl_secondary;
  report.per_frame_gflops.reserve(n_rois_per_frame.size());
  double sum_gflops = 0.0;
  double sum_energy = 0.0;
  for (int n : n_rois_per_frame) {
    const double g = frame_gflops(cl_primary, cl_secondary, n);
    report.per_frame_gflops.push_back(g);
    sum_gflops += g;
    sum_energy += frame_energy(params, g, per_frame_mode);
  }
  if (!n_rois_per_frame.empty()) {
    report.mean_gflops = sum_gflops / n_rois_per_frame.size();
    report.mean_energy_j = sum_energy / n_rois_per_frame.size();
  }
  return report;
}

}  // namespace rgf

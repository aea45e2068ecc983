#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "rgf/runner.hpp"

using rgf::FlopsCatalog;
using rgf::Frame;
using rgf::RunMode;
using rgf::RunOutputs;
using rgf::RunSpec;
using rgf::SceneGenConfig;

namespace {

std::vector<Frame> small_scene(std::uint64_t seed = 1, int n_frames = 25) {
  SceneGenConfig cfg;
  cfg.n_frames = n_frames;
  cfg.objects_min = 2;
  cfg.objects_max = 6;
  cfg.seed = seed;
  return generate_scene(cfg, rgf::reference_camera());
}

}  // namespace

TEST_CASE("primary-only run uses no ROIs and no secondary compute") {
  const auto frames = small_scene();
  RunSpec spec;
  spec.mode = RunMode::primary_only;
  const RunOutputs out = run_evaluate(frames, spec, FlopsCatalog::builtin());
  REQUIRE(out.frame_results.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(out.frame_results[i].n_rois == 0);
    CHECK(out.frame_results[i].secondary_count == 0);
    CHECK(out.cost.per_frame_gflops[i] == Catch::Approx(66.4));
  }
  CHECK(out.cost.mean_gflops == Catch::Approx(66.4));
}

TEST_CASE("per-frame gflops recounts against the cost formula") {
  const auto frames = small_scene(9);
  RunSpec spec;
  const RunOutputs out = run_evaluate(frames, spec, FlopsCatalog::builtin());
  const auto catalog = FlopsCatalog::builtin();
  const double cp = catalog.flops_for("yolov3-spp", 416);
  const double cs = catalog.flops_for("ssdlite", 300);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(out.cost.per_frame_gflops[i] ==
          Catch::Approx(cp + cs * out.frame_results[i].n_rois));
  }
}

TEST_CASE("runs are deterministic and thread-count independent") {
  const auto frames = small_scene(4, 40);
  RunSpec spec;
  spec.threads = 1;
  const RunOutputs seq = run_evaluate(frames, spec, FlopsCatalog::builtin());
  spec.threads = 4;
  const RunOutputs par = run_evaluate(frames, spec, FlopsCatalog::builtin());

  REQUIRE(seq.frame_results.size() == par.frame_results.size());
  for (std::size_t i = 0; i < seq.frame_results.size(); ++i) {
    CHECK(seq.frame_results[i].detections == par.frame_results[i].detections);
    CHECK(seq.frame_results[i].n_rois == par.frame_results[i].n_rois);
  }
  CHECK(per_frame_csv(seq) == per_frame_csv(par));
  CHECK(cost_csv(seq, spec) == cost_csv(par, spec));
  CHECK(metrics_to_json(seq, spec).dump(2) == metrics_to_json(par, spec).dump(2));
}

TEST_CASE("csv outputs have aligned rows and headers") {
  const auto frames = small_scene(2, 5);
  RunSpec spec;
  const RunOutputs out = run_evaluate(frames, spec, FlopsCatalog::builtin());

  const std::string pf = per_frame_csv(out);
  CHECK(pf.rfind("frame_id,recall,n_rois,gflops\n", 0) == 0);
  CHECK(std::count(pf.begin(), pf.end(), '\n') == 6);

  const std::string cost = cost_csv(out, spec);
  CHECK(cost.rfind("frame_id,n_rois,gflops,energy_j\n", 0) == 0);
  CHECK(std::count(cost.begin(), cost.end(), '\n') == 6);

  const auto j = metrics_to_json(out, spec);
  CHECK(j["mode"] == "fusion");
  CHECK(j["per_frame_recall"].size() == 5);
  CHECK(j["tp_by_area_bucket"].size() == rgf::kAreaBuckets);
  CHECK(j["true_positives"].get<long>() + j["false_negatives"].get<long>() ==
        out.metrics.true_positives + out.metrics.false_negatives);
}

TEST_CASE("sweep sorts values and matches single runs") {
  const auto frames = small_scene(6, 15);
  RunSpec spec;
  const auto catalog = FlopsCatalog::builtin();
  const auto points = run_sweep(frames, spec, catalog, rgf::SweepAxis::roi_size, {400, 80, 240});
  REQUIRE(points.size() == 3);
  CHECK(points[0].value == 80);
  CHECK(points[1].value == 240);
  CHECK(points[2].value == 400);
  for (const auto& pt : points) {
    RunSpec one = spec;
    one.fusion.roi_size = pt.value;
    const auto out = run_evaluate(frames, one, catalog);
    CHECK(pt.recall == out.metrics.recall);
    CHECK(pt.mean_gflops == out.cost.mean_gflops);
  }
  const std::string csv = sweep_csv(points);
  CHECK(csv.rfind("value,recall,mean_gflops\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  CHECK_THROWS_AS(run_sweep(frames, spec, catalog, rgf::SweepAxis::roi_size, {}),
                  std::invalid_argument);
}

TEST_CASE("secondary input size sweep changes the cost model") {
  const auto frames = small_scene(8, 10);
  RunSpec spec;
  spec.secondary = {"tiny-yolov3", 300};
  const auto catalog = FlopsCatalog::builtin();
  const auto points =
      run_sweep(frames, spec, catalog, rgf::SweepAxis::secondary_input_size, {200, 400});
  REQUIRE(points.size() == 2);
  CHECK(points[0].mean_gflops < points[1].mean_gflops);
}

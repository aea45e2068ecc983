// Command-line driver: synthetic scene generation, fusion evaluation, and
// hyperparameter sweeps with CSV/JSON reports.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgf/flops_catalog.hpp"
#include "rgf/runner.hpp"
#include "rgf/scene.hpp"
#include "rgf/scene_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInternalError = 2;

struct SceneFileConfig {
  rgf::SceneGenConfig gen;
  rgf::CameraIntrinsics camera;
};

SceneFileConfig default_scene_config() {
  return {rgf::reference_scene_config(), rgf::reference_camera()};
}

SceneFileConfig load_scene_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;

  SceneFileConfig cfg = default_scene_config();
  if (j.contains("camera")) {
    const auto& c = j["camera"];
    cfg.camera.fx = c.value("fx", cfg.camera.fx);
    cfg.camera.fy = c.value("fy", cfg.camera.fy);
    cfg.camera.cx0 = c.value("cx", cfg.camera.cx0);
    cfg.camera.cy0 = c.value("cy", cfg.camera.cy0);
    cfg.camera.width = c.value("width", cfg.camera.width);
    cfg.camera.height = c.value("height", cfg.camera.height);
  }
  cfg.gen.n_frames = j.value("n_frames", cfg.gen.n_frames);
  if (j.contains("objects_per_frame")) {
    cfg.gen.objects_min = j["objects_per_frame"].at(0).get<int>();
    cfg.gen.objects_max = j["objects_per_frame"].at(1).get<int>();
  }
  if (j.contains("class_mix")) {
    for (int c = 0; c < rgf::kNumClasses; ++c) {
      const char* name = rgf::class_name(static_cast<rgf::ClassId>(c));
      cfg.gen.class_mix[c] = j["class_mix"].value(name, 0.0);
    }
  }
  if (j.contains("depth_range")) {
    cfg.gen.depth_min = j["depth_range"].at(0).get<double>();
    cfg.gen.depth_max = j["depth_range"].at(1).get<double>();
  }
  cfg.gen.radar_hit_prob = j.value("radar_hit_prob", cfg.gen.radar_hit_prob);
  cfg.gen.radar_pos_noise_m = j.value("radar_pos_noise_m", cfg.gen.radar_pos_noise_m);
  cfg.gen.clutter_rate = j.value("clutter_rate", cfg.gen.clutter_rate);
  cfg.gen.seed = j.value("seed", cfg.gen.seed);
  return cfg;
}

rgf::DetectorSpec parse_detector(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw std::runtime_error("detector must be NAME:SIZE, got '" + text + "'");
  }
  rgf::DetectorSpec spec;
  spec.name = text.substr(0, colon);
  spec.input_size = std::stoi(text.substr(colon + 1));
  if (spec.input_size <= 0) throw std::runtime_error("detector input size must be positive");
  return spec;
}

std::vector<int> parse_values(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) values.push_back(std::stoi(token));
  }
  return values;
}

struct EvalOptions {
  std::string scene_path;
  std::string primary = "yolov3-spp:416";
  std::string secondary = "ssdlite:300";
  std::string mode = "fusion";
  std::string out_dir = "out";
  std::string catalog_path;
  rgf::RunSpec spec;
  double dedup_iou = -1.0;
};

void add_eval_options(CLI::App* cmd, EvalOptions& opt) {
  cmd->add_option("--scene", opt.scene_path, "Scene sequence file (JSON)")->required();
  cmd->add_option("--primary", opt.primary, "Primary detector as NAME:SIZE");
  cmd->add_option("--secondary", opt.secondary, "Secondary detector as NAME:SIZE");
  cmd->add_option("--roi-size", opt.spec.fusion.roi_size, "Radar ROI size in pixels");
  cmd->add_option("--nms-iou", opt.spec.fusion.nms_iou, "NMS IoU threshold");
  cmd->add_option("--match-iou", opt.spec.match_iou, "Evaluation matching IoU");
  cmd->add_option("--score-floor", opt.spec.fusion.score_floor, "Drop detections below this score");
  cmd->add_option("--max-proposals", opt.spec.fusion.max_proposals, "Cap on ROIs per frame");
  cmd->add_option("--dedup-iou", opt.dedup_iou, "Enable proposal dedup at this IoU");
  cmd->add_flag("--class-agnostic-nms", opt.spec.fusion.class_agnostic_nms,
                "Suppress across classes in NMS");
  cmd->add_option("--mode", opt.mode, "fusion or primary-only")
      ->check(CLI::IsMember({"fusion", "primary-only"}));
  cmd->add_option("--seed", opt.spec.profile.seed, "Synthetic detector seed");
  cmd->add_option("--p-max", opt.spec.profile.p_max, "Synthetic detector peak probability");
  cmd->add_option("--area-lo", opt.spec.profile.area_lo, "Ramp start (effective px^2)");
  cmd->add_option("--area-hi", opt.spec.profile.area_hi, "Ramp end (effective px^2)");
  cmd->add_option("--visibility-min", opt.spec.profile.visibility_min,
                  "Minimum visible fraction for detection");
  cmd->add_option("--loc-noise", opt.spec.profile.loc_noise_frac,
                  "Localization noise fraction of box size");
  cmd->add_option("--fp-rate", opt.spec.profile.false_positive_rate,
                  "Expected false positives per region");
  cmd->add_option("--fps", opt.spec.energy.fps, "Frame rate for the energy model");
  cmd->add_option("--ee-hw", opt.spec.energy.ee_hw_tops_per_w, "Accelerator efficiency (TOPS/W)");
  cmd->add_flag("--energy-per-frame", opt.spec.energy_per_frame_mode,
                "Drop the fps factor in the compute energy term");
  cmd->add_option("--threads", opt.spec.threads, "Frames evaluated in parallel");
  cmd->add_option("--catalog", opt.catalog_path, "Detector FLOPs catalog file");
  cmd->add_option("--out", opt.out_dir, "Output directory");
}

void finish_eval_options(EvalOptions& opt) {
  opt.spec.primary = parse_detector(opt.primary);
  opt.spec.secondary = parse_detector(opt.secondary);
  opt.spec.mode = opt.mode == "fusion" ? rgf::RunMode::fusion : rgf::RunMode::primary_only;
  if (opt.dedup_iou > 0.0) opt.spec.fusion.dedup_iou = opt.dedup_iou;
}

rgf::FlopsCatalog load_catalog(const EvalOptions& opt) {
  return opt.catalog_path.empty() ? rgf::FlopsCatalog::builtin()
                                  : rgf::FlopsCatalog::load(opt.catalog_path);
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed, std::optional<int> n_frames) {
  SceneFileConfig cfg =
      config_path.empty() ? default_scene_config() : load_scene_config(config_path);
  if (seed) cfg.gen.seed = *seed;
  if (n_frames) cfg.gen.n_frames = *n_frames;

  const std::vector<rgf::Frame> frames = rgf::generate_scene(cfg.gen, cfg.camera);
  rgf::save_frames(frames, out_path);

  std::size_t objects = 0;
  std::size_t radar = 0;
  for (const auto& f : frames) {
    objects += f.ground_truth.size();
    radar += f.radar_points.size();
  }
  std::cout << "wrote " << frames.size() << " frames, " << objects << " objects, " << radar
            << " radar points to " << out_path << "\n";
  return kExitOk;
}

int cmd_evaluate(EvalOptions& opt) {
  finish_eval_options(opt);
  const rgf::FlopsCatalog catalog = load_catalog(opt);
  const std::vector<rgf::Frame> frames = rgf::load_frames(opt.scene_path);
  const rgf::RunOutputs out = rgf::run_evaluate(frames, opt.spec, catalog);
  rgf::write_reports(out, opt.spec, opt.out_dir);
  std::cout << rgf::summary_row(out, opt.spec) << "\n";
  return kExitOk;
}

int cmd_sweep(EvalOptions& opt, const std::string& axis_name, const std::string& values_text) {
  finish_eval_options(opt);
  const rgf::FlopsCatalog catalog = load_catalog(opt);
  const std::vector<rgf::Frame> frames = rgf::load_frames(opt.scene_path);

  rgf::SweepAxis axis;
  if (axis_name == "roi_size") {
    axis = rgf::SweepAxis::roi_size;
  } else if (axis_name == "secondary_input_size") {
    axis = rgf::SweepAxis::secondary_input_size;
  } else {
    throw std::runtime_error("unknown sweep axis: " + axis_name);
  }
  const std::vector<int> values = parse_values(values_text);
  if (values.empty()) throw std::runtime_error("--values must be a nonempty comma list");

  const auto points = rgf::run_sweep(frames, opt.spec, catalog, axis, values);
  std::filesystem::create_directories(opt.out_dir);
  const std::string csv = rgf::sweep_csv(points);
  std::ofstream f(std::filesystem::path(opt.out_dir) / "sweep.csv");
  f << csv;
  std::cout << csv;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar-guided ROI fusion for 2D object detection"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a synthetic scene sequence");
  std::string gen_config;
  std::string gen_out = "scene.json";
  std::optional<std::uint64_t> gen_seed;
  std::optional<int> gen_frames;
  gen->add_option("--config", gen_config, "Scene generator config (JSON)");
  gen->add_option("--out", gen_out, "Output scene file");
  gen->add_option("--seed", gen_seed, "Override generator seed");
  gen->add_option("--frames", gen_frames, "Override frame count");

  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("evaluate", "Evaluate fusion or the primary-only baseline");
  add_eval_options(eval, eval_opt);

  EvalOptions sweep_opt;
  std::string sweep_axis = "roi_size";
  std::string sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Sweep ROI size or secondary input size");
  add_eval_options(sweep, sweep_opt);
  sweep->add_option("--sweep-axis", sweep_axis, "roi_size or secondary_input_size")
      ->check(CLI::IsMember({"roi_size", "secondary_input_size"}));
  sweep->add_option("--values", sweep_values, "Comma-separated sweep values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_config, gen_out, gen_seed, gen_frames);
    if (eval->parsed()) return cmd_evaluate(eval_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt, sweep_axis, sweep_values);
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

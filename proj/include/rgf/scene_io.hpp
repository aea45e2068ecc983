#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgf/scene.hpp"

namespace rgf {

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& field, int frame_id = -1) {
  std::ostringstream msg;
  msg << "scene schema error: ";
  if (frame_id >= 0) msg << "frame " << frame_id << ": ";
  msg << field;
  throw SchemaError(msg.str());
}

inline double require_number(const nlohmann::json& j, const char* field, int frame_id = -1) {
  if (!j.contains(field) || !j[field].is_number()) {
    schema_fail(std::string("missing or non-numeric field '") + field + "'", frame_id);
  }
  return j[field].get<double>();
}

}  // namespace detail

// Sequence file layout:
// {
//   "camera": {
//     "intrinsics": {"fx","fy","cx","cy","width","height"},
//     "radar_to_camera": {"rotation": [9, row-major], "translation": [3]}
//   },
//   "frames": [
//     {"frame_id": n,
//      "radar": [{"x","y","z", "v"?, "is_clutter"?}],
//      "gt":    [{"x0","y0","x1","y1","class","occluded"?}],
//      "image_path"?: "..."}
//   ]
// }

inline nlohmann::json frames_to_json(const std::vector<Frame>& frames) {
  if (frames.empty()) throw std::invalid_argument("save_frames: empty sequence");
  const Frame& first = frames.front();
  for (const Frame& f : frames) {
    if (!(f.intrinsics == first.intrinsics) || !(f.radar_to_camera == first.radar_to_camera)) {
      throw std::invalid_argument("save_frames: frames must share one calibration");
    }
  }

  nlohmann::json j;
  const CameraIntrinsics& intr = first.intrinsics;
  j["camera"]["intrinsics"] = {{"fx", intr.fx},       {"fy", intr.fy},
                               {"cx", intr.cx0},      {"cy", intr.cy0},
                               {"width", intr.width}, {"height", intr.height}};
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(first.radar_to_camera.rotation()(r, c));
  }
  j["camera"]["radar_to_camera"]["rotation"] = rot;
  j["camera"]["radar_to_camera"]["translation"] = {first.radar_to_camera.translation().x(),
                                                   first.radar_to_camera.translation().y(),
                                                   first.radar_to_camera.translation().z()};

  j["frames"] = nlohmann::json::array();
  for (const Frame& f : frames) {
    nlohmann::json jf;
    jf["frame_id"] = f.frame_id;
    if (f.image_path) jf["image_path"] = *f.image_path;
    jf["radar"] = nlohmann::json::array();
    for (const RadarPoint& p : f.radar_points) {
      nlohmann::json jp = {{"x", p.x}, {"y", p.y}, {"z", p.z}};
      if (p.radial_velocity) jp["v"] = *p.radial_velocity;
      if (p.is_clutter) jp["is_clutter"] = true;
      jf["radar"].push_back(jp);
    }
    jf["gt"] = nlohmann::json::array();
    for (const GroundTruthBox& g : f.ground_truth) {
      nlohmann::json jg = {{"x0", g.x0},
                           {"y0", g.y0},
                           {"x1", g.x1},
                           {"y1", g.y1},
                           {"class", class_name(g.class_id)}};
      if (g.occluded) jg["occluded"] = true;
      jf["gt"].push_back(jg);
    }
    j["frames"].push_back(std::move(jf));
  }
  return j;
}

inline void save_frames(const std::vector<Frame>& frames, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << frames_to_json(frames).dump(2) << "\n";
}

inline std::vector<Frame> frames_from_json(const nlohmann::json& j) {
  using detail::require_number;
  using detail::schema_fail;

  if (!j.contains("camera")) schema_fail("missing field 'camera'");
  const nlohmann::json& cam = j["camera"];
  if (!cam.contains("intrinsics")) schema_fail("missing field 'intrinsics'");
  const nlohmann::json& ji = cam["intrinsics"];
  CameraIntrinsics intr;
  intr.fx = require_number(ji, "fx");
  intr.fy = require_number(ji, "fy");
  intr.cx0 = require_number(ji, "cx");
  intr.cy0 = require_number(ji, "cy");
  intr.width = static_cast<int>(require_number(ji, "width"));
  intr.height = static_cast<int>(require_number(ji, "height"));
  try {
    intr.validate();
  } catch (const std::invalid_argument& e) {
    schema_fail(std::string("intrinsics: ") + e.what());
  }

  if (!cam.contains("radar_to_camera")) schema_fail("missing field 'radar_to_camera'");
  const nlohmann::json& jc = cam["radar_to_camera"];
  if (!jc.contains("rotation") || !jc["rotation"].is_array() || jc["rotation"].size() != 9) {
    schema_fail("radar_to_camera.rotation must be a 9-element array");
  }
  if (!jc.contains("translation") || !jc["translation"].is_array() ||
      jc["translation"].size() != 3) {
    schema_fail("radar_to_camera.translation must be a 3-element array");
  }
  Eigen::Matrix3d rot;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot(r, c) = jc["rotation"][3 * r + c].get<double>();
  }
  Eigen::Vector3d trans{jc["translation"][0].get<double>(), jc["translation"][1].get<double>(),
                        jc["translation"][2].get<double>()};
  Pose3 radar_to_camera;
  try {
    radar_to_camera = Pose3(rot, trans);
  } catch (const std::invalid_argument& e) {
    schema_fail(std::string("radar_to_camera: ") + e.what());
  }

  if (!j.contains("frames") || !j["frames"].is_array()) schema_fail("missing field 'frames'");

  std::vector<Frame> frames;
  for (const nlohmann::json& jf : j["frames"]) {
    Frame f;
    f.frame_id = static_cast<int>(require_number(jf, "frame_id"));
    f.width = intr.width;
    f.height = intr.height;
    f.intrinsics = intr;
    f.radar_to_camera = radar_to_camera;
    if (jf.contains("image_path")) f.image_path = jf["image_path"].get<std::string>();

    for (const auto& existing : frames) {
      if (existing.frame_id == f.frame_id) schema_fail("duplicate frame_id", f.frame_id);
    }

    if (jf.contains("radar")) {
      for (const nlohmann::json& jp : jf["radar"]) {
        RadarPoint p;
        p.x = require_number(jp, "x", f.frame_id);
        p.y = require_number(jp, "y", f.frame_id);
        p.z = require_number(jp, "z", f.frame_id);
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
          schema_fail("radar point position must be finite", f.frame_id);
        }
        if (p.x * p.x + p.y * p.y + p.z * p.z <= 0.0) {
          schema_fail("radar point range must be positive", f.frame_id);
        }
        if (jp.contains("v")) p.radial_velocity = jp["v"].get<double>();
        if (jp.contains("is_clutter")) p.is_clutter = jp["is_clutter"].get<bool>();
        f.radar_points.push_back(p);
      }
    }

    if (jf.contains("gt")) {
      for (const nlohmann::json& jg : jf["gt"]) {
        GroundTruthBox g;
        g.x0 = require_number(jg, "x0", f.frame_id);
        g.y0 = require_number(jg, "y0", f.frame_id);
        g.x1 = require_number(jg, "x1", f.frame_id);
        g.y1 = require_number(jg, "y1", f.frame_id);
        if (!jg.contains("class")) schema_fail("gt box missing field 'class'", f.frame_id);
        try {
          g.class_id = class_from_name(jg["class"].get<std::string>());
        } catch (const std::invalid_argument& e) {
          schema_fail(e.what(), f.frame_id);
        }
        if (jg.contains("occluded")) g.occluded = jg["occluded"].get<bool>();
        if (!(g.x0 < g.x1) || !(g.y0 < g.y1)) {
          schema_fail("gt box must have positive extent", f.frame_id);
        }
        if (g.x0 < 0.0 || g.y0 < 0.0 || g.x1 > intr.width || g.y1 > intr.height) {
          schema_fail("gt box outside image bounds", f.frame_id);
        }
        f.ground_truth.push_back(g);
      }
    }

    frames.push_back(std::move(f));
  }
  return frames;
}

inline std::vector<Frame> load_frames(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("scene schema error: invalid JSON: ") + e.what());
  }
  return frames_from_json(j);
}

}  // namespace rgf

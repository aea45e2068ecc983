#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rgf {

// Per-detector compute cost anchors: (square input size, GFLOPs). Lookups at
// an anchor size return the anchor value exactly; anywhere else the cost is
// scaled quadratically from the nearest anchor, FLOPs(s) = FLOPs(s0)*(s/s0)^2,
// since convolutional cost grows with pixel count.
class FlopsCatalog {
 public:
  void add_anchor(const std::string& name, int input_size, double gflops) {
    auto& anchors = detectors_[name];
    anchors.emplace_back(input_size, gflops);
    std::sort(anchors.begin(), anchors.end());
  }

  bool has(const std::string& name) const { return detectors_.count(name) > 0; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, anchors] : detectors_) out.push_back(name);
    return out;
  }

  double flops_for(const std::string& name, int input_size) const {
    auto it = detectors_.find(name);
    if (it == detectors_.end() || it->second.empty()) {
      throw std::invalid_argument("unknown detector: " + name);
    }
    const auto& anchors = it->second;
    // Nearest anchor; ties resolve to the smaller size.
    const auto* best = &anchors.front();
    for (const auto& a : anchors) {
      if (a.first == input_size) return a.second;
      if (std::abs(a.first - input_size) < std::abs(best->first - input_size)) best = &a;
    }
    const double ratio = static_cast<double>(input_size) / best->first;
    return best->second * ratio * ratio;
  }

  // Measured GFLOPs for yolov3-spp, tiny-yolov3, and SSDlite.
  static FlopsCatalog builtin() {
    FlopsCatalog c;
    c.add_anchor("yolov3-spp", 416, 66.4);
    c.add_anchor("yolov3-spp", 640, 157.0);
    c.add_anchor("yolov3-spp", 1080, 447.0);
    c.add_anchor("yolov3-spp", 1900, 1384.6);
    c.add_anchor("tiny-yolov3", 200, 1.3);
    c.add_anchor("tiny-yolov3", 300, 2.9);
    c.add_anchor("tiny-yolov3", 400, 5.2);
    c.add_anchor("tiny-yolov3", 600, 14.1);
    c.add_anchor("ssdlite", 200, 0.20);
    c.add_anchor("ssdlite", 300, 0.43);
    c.add_anchor("ssdlite", 400, 0.74);
    return c;
  }

  // Catalog file: {"detectors": [{"name": ..., "anchors": [[size, gflops], ...]}]}
  static FlopsCatalog load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open detector catalog: " + path);
    nlohmann::json j;
    in >> j;
    FlopsCatalog c;
    for (const auto& d : j.at("detectors")) {
      const std::string name = d.at("name").get<std::string>();
      for (const auto& a : d.at("anchors")) {
        c.add_anchor(name, a.at(0).get<int>(), a.at(1).get<double>());
      }
    }
    return c;
  }

  void save(const std::string& path) const {
    nlohmann::json j;
    j["detectors"] = nlohmann::json::array();
    for (const auto& [name, anchors] : detectors_) {
      nlohmann::json d;
      d["name"] = name;
      d["anchors"] = nlohmann::json::array();
      for (const auto& [size, gflops] : anchors) d["anchors"].push_back({size, gflops});
      j["detectors"].push_back(d);
    }
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  }

 private:
  std::map<std::string, std::vector<std::pair<int, double>>> detectors_;
};

}  // namespace rgf

#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace rgf {

enum class ClassId { car = 0, truck, bus, pedestrian, bicycle, motorcycle };

inline constexpr int kNumClasses = 6;

inline const char* class_name(ClassId c) {
  switch (c) {
    case ClassId::car: return "car";
    case ClassId::truck: return "truck";
    case ClassId::bus: return "bus";
    case ClassId::pedestrian: return "pedestrian";
    case ClassId::bicycle: return "bicycle";
    case ClassId::motorcycle: return "motorcycle";
  }
  return "unknown";
}

inline ClassId class_from_name(const std::string& name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (name == class_name(static_cast<ClassId>(i))) return static_cast<ClassId>(i);
  }
  throw std::invalid_argument("unknown class name: " + name);
}

struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }

  friend bool operator==(const Box&, const Box&) = default;
};

inline double area(const Box& b) { return std::max(0.0, b.width()) * std::max(0.0, b.height()); }

inline double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

// Intersection over union, in [0, 1].
inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (area(a) + area(b) - inter);
}

struct Detection {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  ClassId class_id = ClassId::car;
  double score = 0.0;

  Box box() const { return {x0, y0, x1, y1}; }

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  ClassId class_id = ClassId::car;
  bool occluded = false;

  Box box() const { return {x0, y0, x1, y1}; }
  double area() const { return (x1 - x0) * (y1 - y0); }

  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

}  // namespace rgf

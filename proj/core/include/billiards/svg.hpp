#pragma once

// Static layered SVG output.

#include <string>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

class SvgDocument {
 public:
  explicit SvgDocument(double width_px = 800.0) : width_(width_px) {}
  void layer(const std::string& id);
  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool closed = false);
  void segment(Vec2 a, Vec2 b, const std::string& stroke, double width);
  void dot(Vec2 c, double r, const std::string& fill);
  std::string str() const;

 private:
  struct Item {
    std::string layer;
    std::vector<Vec2> pts;
    std::string stroke;
    double width;
    int kind;  // 0 polyline, 1 closed polyline, 2 dot
  };
  double width_;
  std::string current_ = "main";
  std::vector<std::string> layers_{"main"};
  std::vector<Item> items_;
};

}  // namespace billiards

#include "billiards/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace billiards {

void SvgDocument::layer(const std::string& id) {
  current_ = id;
  if (std::find(layers_.begin(), layers_.end(), id) == layers_.end()) layers_.push_back(id);
}

void SvgDocument::polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width, bool closed) {
  items_.push_back({current_, pts, stroke, width, closed ? 1 : 0});
}

void SvgDocument::segment(Vec2 a, Vec2 b, const std::string& stroke, double width) {
  items_.push_back({current_, {a, b}, stroke, width, 0});
}

void SvgDocument::dot(Vec2 c, double r, const std::string& fill) { items_.push_back({current_, {c}, fill, r, 2}); }

std::string SvgDocument::str() const {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& it : items_)
    for (const Vec2& p : it.pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  if (!(x1 > x0)) x0 = -1, x1 = 1;
  if (!(y1 > y0)) y0 = -1, y1 = 1;
  double pad = 0.03 * std::max(x1 - x0, y1 - y0);
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  double scale = width_ / (x1 - x0);
  double height = (y1 - y0) * scale;
  auto X = [&](double x) { return (x - x0) * scale; };
  auto Y = [&](double y) { return (y1 - y) * scale; };
  std::ostringstream o;
  char buf[128];
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", width_,
                height);
  o << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& layer : layers_) {
    o << "<g id=\"" << layer << "\">\n";
    for (const auto& it : items_) {
      if (it.layer != layer) continue;
      if (it.kind == 2) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\"/>\n", X(it.pts[0].x),
                      Y(it.pts[0].y), it.width, it.stroke.c_str());
        o << buf;
        continue;
      }
      o << (it.kind == 1 ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << it.stroke
        << "\" stroke-width=\"" << it.width << "\" points=\"";
      for (const Vec2& p : it.pts) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f ", X(p.x), Y(p.y));
        o << buf;
      }
      o << "\"/>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace billiards

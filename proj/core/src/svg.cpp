#include "scs/svg.hpp"

#include <cstdio>

namespace scs::svg {

namespace {
std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
}  // namespace

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::line(Vec2 a, Vec2 b, const std::string& stroke, double width) {
  body_ += "<line x1=\"" + num(a.x()) + "\" y1=\"" + num(a.y()) + "\" x2=\"" +
           num(b.x()) + "\" y2=\"" + num(b.y()) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Canvas::polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                      double width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\" points=\"";
  for (const auto& p : pts) body_ += num(p.x()) + "," + num(p.y()) + " ";
  body_ += "\"/>\n";
}

void Canvas::circle(Vec2 center, double radius, const std::string& fill) {
  body_ += "<circle cx=\"" + num(center.x()) + "\" cy=\"" + num(center.y()) +
           "\" r=\"" + num(radius) + "\" fill=\"" + fill + "\"/>\n";
}

void Canvas::rect(Vec2 corner, double w, double h, const std::string& fill) {
  body_ += "<rect x=\"" + num(corner.x()) + "\" y=\"" + num(corner.y()) +
           "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"" +
           fill + "\"/>\n";
}

void Canvas::cross(Vec2 c, double arm, const std::string& stroke) {
  line({c.x() - arm, c.y() - arm}, {c.x() + arm, c.y() + arm}, stroke, 2.0);
  line({c.x() - arm, c.y() + arm}, {c.x() + arm, c.y() - arm}, stroke, 2.0);
}

void Canvas::text(Vec2 pos, const std::string& s, int font_px) {
  body_ += "<text x=\"" + num(pos.x()) + "\" y=\"" + num(pos.y()) +
           "\" font-size=\"" + std::to_string(font_px) +
           "\" font-family=\"sans-serif\">" + s + "</text>\n";
}

std::string Canvas::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" "
         "viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\" width=\"" +
         num(width_) + "\" height=\"" + num(height_) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

DataMap::DataMap(Vec2 data_min, Vec2 data_max, Vec2 pix_min, Vec2 pix_max)
    : dmin_(data_min), pmin_(pix_min) {
  const Vec2 span = data_max - data_min;
  scale_ = Vec2(span.x() != 0.0 ? 1.0 / span.x() : 0.0,
                span.y() != 0.0 ? 1.0 / span.y() : 0.0);
  psize_ = pix_max - pix_min;
}

Vec2 DataMap::operator()(const Vec2& p) const {
  const double fx = (p.x() - dmin_.x()) * scale_.x();
  const double fy = (p.y() - dmin_.y()) * scale_.y();
  return {pmin_.x() + fx * psize_.x(), pmin_.y() + (1.0 - fy) * psize_.y()};
}

}  // namespace scs::svg

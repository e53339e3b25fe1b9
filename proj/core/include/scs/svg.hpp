#pragma once

#include <string>
#include <vector>

#include "scs/types.hpp"

// Tiny SVG emitter for the plot command: pure text generation, no rendering
// dependency, byte-deterministic output.
namespace scs::svg {

class Canvas {
 public:
  Canvas(double width, double height);

  void line(Vec2 a, Vec2 b, const std::string& stroke, double width = 1.0);
  void polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                double width = 1.5);
  void circle(Vec2 center, double radius, const std::string& fill);
  void rect(Vec2 corner, double w, double h, const std::string& fill);
  void cross(Vec2 center, double arm, const std::string& stroke);
  void text(Vec2 pos, const std::string& s, int font_px = 12);

  std::string str() const;

 private:
  double width_, height_;
  std::string body_;
};

// Affine map from a data-space box to canvas pixels (y flipped).
class DataMap {
 public:
  DataMap(Vec2 data_min, Vec2 data_max, Vec2 pix_min, Vec2 pix_max);
  Vec2 operator()(const Vec2& p) const;

 private:
  Vec2 dmin_, scale_, pmin_, psize_;
};

}  // namespace scs::svg

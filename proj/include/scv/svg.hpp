#pragma once

#include <fstream>

#include "scv/operad.hpp"

namespace scv {

struct UnsupportedDim : ScvError {
  explicit UnsupportedDim(const std::string& m) : ScvError(m) {}
};

// Renders a two-coordinate projection of a configuration. Closed boxes are
// solid, open boxes hatched. Geometry is written at six decimal digits with
// ties rounded to even.
inline std::string render_svg(const Configuration& config, int coord_x, int coord_y,
                              const std::string& caption = "") {
  const int size = 440;
  const int margin = 20;
  const int span = size - 2 * margin;
  auto sx = [&](const Rational& v) {
    return (Rational(margin) + Rational(span) * (v + Rational(1)) / Rational(2)).to_decimal(6);
  };
  auto sy = [&](const Rational& v) {
    return (Rational(margin) + Rational(span) * (Rational(1) - v) / Rational(2)).to_decimal(6);
  };
  auto sw = [&](const Rational& lo, const Rational& hi) {
    return (Rational(span) * (hi - lo) / Rational(2)).to_decimal(6);
  };
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(size) + "\" height=\"" + std::to_string(size) + "\">\n";
  out += "  <defs>\n"
         "    <pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\">\n"
         "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#3366aa\" stroke-width=\"2\"/>\n"
         "    </pattern>\n"
         "  </defs>\n";
  out += "  <rect x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(margin) +
         "\" width=\"" + std::to_string(span) + "\" height=\"" + std::to_string(span) +
         "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  if (config.output == Color::Open && coord_x == 0) {
    // the anchored face of the half ambient
    out += "  <line x1=\"" + sx(Rational(0)) + "\" y1=\"" + std::to_string(margin) + "\" x2=\"" +
           sx(Rational(0)) + "\" y2=\"" + std::to_string(size - margin) +
           "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (const auto& [label, box] : config.boxes) {
    const auto& bx = box[static_cast<size_t>(coord_x)];
    const auto& by = box[static_cast<size_t>(coord_y)];
    std::string fill = label.color == Color::Closed ? "#d88a3f" : "url(#hatch)";
    out += "  <rect x=\"" + sx(bx.first) + "\" y=\"" + sy(by.second) + "\" width=\"" +
           sw(bx.first, bx.second) + "\" height=\"" + sw(by.first, by.second) + "\" fill=\"" +
           fill + "\" fill-opacity=\"0.85\" stroke=\"#222222\" stroke-width=\"1\">\n";
    out += "    <title>" + label.to_string() + "</title>\n  </rect>\n";
  }
  if (!caption.empty()) {
    out += "  <text x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(size - 4) +
           "\" font-size=\"12\" font-family=\"monospace\">" + caption + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

// One frame with one panel per chain term, tiled horizontally.
inline std::string render_frame(const std::vector<std::pair<std::string, Configuration>>& panels,
                                int coord_x, int coord_y, const std::string& caption) {
  const int size = 440;
  int count = std::max<int>(1, static_cast<int>(panels.size()));
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                    std::to_string(size * count) + "\" height=\"" + std::to_string(size + 18) +
                    "\">\n";
  for (size_t i = 0; i < panels.size(); ++i) {
    out += "<g transform=\"translate(" + std::to_string(size * i) + ",0)\">\n";
    out += render_svg(panels[i].second, coord_x, coord_y, panels[i].first);
    out += "</g>\n";
  }
  out += "<text x=\"8\" y=\"" + std::to_string(size + 12) +
         "\" font-size=\"12\" font-family=\"monospace\">" + caption + "</text>\n</svg>\n";
  return out;
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ScvError("cannot open " + tmp + " for writing");
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw ScvError("cannot move " + tmp + " into place");
  }
}

}  // namespace scv

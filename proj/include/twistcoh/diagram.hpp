#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "twistcoh/chain.hpp"
#include "twistcoh/io.hpp"
#include "twistcoh/setup.hpp"

namespace twistcoh {

struct DiagramLayer {
  std::string label;
  TwistedChain chain;
};

namespace detail {

inline std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v == 0.0 ? 0.0 : v);
  return buf;
}

class SvgCanvas {
 public:
  SvgCanvas(double min_x, double min_y, double max_x, double max_y, double width)
      : min_x_(min_x), max_y_(max_y), scale_(width / (max_x - min_x)),
        width_(width), height_((max_y - min_y) * width / (max_x - min_x)) {}

  double px(cplx t) const { return (t.real() - min_x_) * scale_; }
  double py(cplx t) const { return (max_y_ - t.imag()) * scale_; }
  std::string point(cplx t) const { return fixed(px(t)) + "," + fixed(py(t)); }
  double width() const { return width_; }
  double height() const { return height_; }
  double scale() const { return scale_; }

 private:
  double min_x_;
  double max_y_;
  double scale_;
  double width_;
  double height_;
};

inline constexpr const char* kLayerColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace detail

/// Static SVG of the punctures, their cut rays, the base point and the
/// carriers of the given chains. Output depends only on the inputs.
inline std::string render_diagram(const TwistedSetup& setup, const std::vector<DiagramLayer>& layers = {}) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  auto include = [&](cplx t) {
    min_x = std::min(min_x, t.real());
    max_x = std::max(max_x, t.real());
    min_y = std::min(min_y, t.imag());
    max_y = std::max(max_y, t.imag());
  };
  for (cplx x : setup.punctures()) include(x);
  include(setup.base_point());
  for (const auto& layer : layers) {
    for (const auto& term : layer.chain.terms) {
      include(term.path.start());
      for (const Piece& p : term.path.pieces()) {
        include(piece_end(p));
        if (const auto* arc = std::get_if<Arc>(&p)) {
          include(arc->center + arc->radius);
          include(arc->center - arc->radius);
          include(arc->center + cplx(0.0, arc->radius));
          include(arc->center - cplx(0.0, arc->radius));
        }
      }
    }
  }
  const double pad = 0.25 * std::max(setup.diameter(), 1e-9);
  min_x -= pad;
  max_x += pad;
  min_y -= pad;
  max_y += pad;
  const detail::SvgCanvas canvas(min_x, min_y, max_x, max_y, 800.0);
  const double reach = 2.0 * ((max_x - min_x) + (max_y - min_y));

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fixed(canvas.width()) + "\" height=\"" +
         detail::fixed(canvas.height()) + "\" viewBox=\"0 0 " + detail::fixed(canvas.width()) + " " +
         detail::fixed(canvas.height()) + "\">\n";
  svg += "<metadata>" + setup_to_json(setup).dump() + "</metadata>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  svg += "<g id=\"cuts\" stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\">\n";
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const cplx x = setup.puncture(j);
    const cplx far = x + reach * setup.cut_unit();
    svg += "<line id=\"cut" + std::to_string(j) + "\" x1=\"" + detail::fixed(canvas.px(x)) + "\" y1=\"" +
           detail::fixed(canvas.py(x)) + "\" x2=\"" + detail::fixed(canvas.px(far)) + "\" y2=\"" +
           detail::fixed(canvas.py(far)) + "\"/>\n";
  }
  svg += "</g>\n";

  std::size_t index = 0;
  for (const auto& layer : layers) {
    const char* color = detail::kLayerColors[index % std::size(detail::kLayerColors)];
    svg += "<g id=\"chain" + std::to_string(index) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.2\">\n";
    svg += "<title>" + layer.label + "</title>\n";
    for (const auto& term : layer.chain.terms) {
      std::string d = "M " + canvas.point(term.path.start());
      for (const Piece& p : term.path.pieces()) {
        if (const auto* seg = std::get_if<Segment>(&p)) {
          d += " L " + canvas.point(seg->to);
          continue;
        }
        const auto& arc = std::get<Arc>(p);
        // Polyline through the arc; SVG arc commands cannot draw full turns.
        const int steps = std::max(8, static_cast<int>(std::ceil(std::abs(arc.theta_to - arc.theta_from) / 0.05)));
        for (int k = 1; k <= steps; ++k) d += " L " + canvas.point(piece_point(p, static_cast<double>(k) / steps));
      }
      svg += "<path d=\"" + d + "\"/>\n";
    }
    svg += "</g>\n";
    ++index;
  }

  svg += "<g id=\"punctures\">\n";
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const cplx x = setup.puncture(j);
    svg += "<circle cx=\"" + detail::fixed(canvas.px(x)) + "\" cy=\"" + detail::fixed(canvas.py(x)) +
           "\" r=\"4\" fill=\"black\"/>\n";
    svg += "<text x=\"" + detail::fixed(canvas.px(x) + 6.0) + "\" y=\"" + detail::fixed(canvas.py(x) + 14.0) +
           "\" font-family=\"monospace\" font-size=\"12\">x" + std::to_string(j) + "</text>\n";
  }
  svg += "</g>\n";
  const cplx p = setup.base_point();
  svg += "<g id=\"basepoint\"><rect x=\"" + detail::fixed(canvas.px(p) - 3.0) + "\" y=\"" +
         detail::fixed(canvas.py(p) - 3.0) + "\" width=\"6\" height=\"6\" fill=\"#444444\"/>" +
         "<text x=\"" + detail::fixed(canvas.px(p) + 6.0) + "\" y=\"" + detail::fixed(canvas.py(p) + 14.0) +
         "\" font-family=\"monospace\" font-size=\"12\">p</text></g>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace twistcoh

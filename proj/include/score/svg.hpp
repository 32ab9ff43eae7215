#pragma once

// Deterministic SVG 1.1 rendering of reject curves, confusion stacks and the
// radial (pie) confusion plot.
//
// Coordinates are printed in shortest round-trip form, so values can be
// recovered from the emitted geometry. The plot group carries the data to
// pixel mapping as attributes:
//   x_px = data-x-origin + rate  * data-x-scale
//   y_px = data-y-origin - value * data-y-scale
// Pie sectors are drawn counter-clockwise from angle 0 (pointing right) with
// arcs of at most a quarter turn each.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "score/metrics.hpp"
#include "score/stack.hpp"

namespace score {

struct ChartStyle {
  int width = 800;
  int height = 500;
  int margin = 60;
  int legend_width = 170;
  std::string title;
  std::string x_label = "acceptance rate";
  std::string y_label;

  static ChartStyle curves() {
    ChartStyle s;
    s.y_label = "metric value";
    return s;
  }
  static ChartStyle stack() { return ChartStyle{}; }
  static ChartStyle pie() {
    ChartStyle s;
    s.width = s.height = 600;
    return s;
  }
};

struct SvgDocument {
  std::string text;
  int width = 0;
  int height = 0;
};

namespace svg {

/// Shortest representation that parses back to the same double.
inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::string hex_from_hsl(double hue, double sat, double light) {
  const double c = (1.0 - std::abs(2.0 * light - 1.0)) * sat;
  const double hp = std::fmod(hue, 360.0) / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = light - c / 2.0;
  const auto channel = [m](double v) { return static_cast<int>(std::lround((v + m) * 255.0)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(r), channel(g), channel(b));
  return buf;
}

inline double class_hue(ClassId c) {
  static constexpr std::array<double, 6> hues{215.0, 28.0, 130.0, 350.0, 275.0, 50.0};
  const auto i = c.index();
  return hues[i % hues.size()] + 17.0 * static_cast<double>(i / hues.size());
}

/// Correct cells: saturated hue of the true class. Wrong cells: lighter
/// variants of the same hue, one lightness step per predicted class.
inline std::string cell_color(const CellId& cell, int num_classes) {
  const double hue = class_hue(cell.true_class);
  if (cell.is_correct()) return hex_from_hsl(hue, 0.70, 0.38);
  if (cell.is_other()) return hex_from_hsl(hue, 0.60, 0.72);
  const int t = cell.true_class.value();
  const int p = cell.predicted_class->value();
  const int rank = p < t ? p - 1 : p - 2;  // 0 .. C-2 among the wrong cells of t
  const int steps = std::max(1, num_classes - 2);
  return hex_from_hsl(hue, 0.60, 0.62 + 0.24 * static_cast<double>(rank) / steps);
}

inline std::string curve_color(std::size_t i) {
  static constexpr std::array<double, 8> hues{215.0, 28.0, 130.0, 350.0, 275.0, 50.0, 185.0, 310.0};
  return hex_from_hsl(hues[i % hues.size()], 0.70, 0.40 + 0.12 * static_cast<double>((i / hues.size()) % 3));
}

/// Axis range extended to multiples of a 1-2-5 step.
struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.2;
};

inline Range nice_range(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  return {std::floor(lo / step + 1e-9) * step, std::ceil(hi / step - 1e-9) * step, step};
}

class Canvas {
 public:
  Canvas(const ChartStyle& style) : style_(style) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
         << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height
         << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
         << "\" fill=\"#ffffff\"/>\n";
    if (!style.title.empty()) {
      out_ << "<text class=\"title\" x=\"" << style.width / 2 << "\" y=\"" << style.margin / 2
           << "\" text-anchor=\"middle\" font-size=\"15\">" << escape(style.title) << "</text>\n";
    }
  }

  double plot_left() const { return style_.margin; }
  double plot_right() const { return style_.width - style_.margin - style_.legend_width; }
  double plot_top() const { return style_.margin; }
  double plot_bottom() const { return style_.height - style_.margin; }

  std::ostringstream& out() { return out_; }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries, bool swatch) {
    const double x = plot_right() + 20.0;
    double y = plot_top();
    out_ << "<g class=\"legend\">\n";
    for (const auto& [label, color] : entries) {
      if (swatch) {
        out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"12\" height=\"12\" fill=\""
             << color << "\"/>";
      } else {
        out_ << "<line x1=\"" << num(x) << "\" y1=\"" << num(y - 3) << "\" x2=\"" << num(x + 14) << "\" y2=\""
             << num(y - 3) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
      }
      out_ << "<text x=\"" << num(x + 18) << "\" y=\"" << num(y + 1) << "\">" << escape(label) << "</text>\n";
      y += 18.0;
    }
    out_ << "</g>\n";
  }

  SvgDocument finish() {
    out_ << "</svg>\n";
    return {out_.str(), style_.width, style_.height};
  }

 private:
  const ChartStyle& style_;
  std::ostringstream out_;
};

/// Cartesian frame: gridlines, ticks and axis labels for x in [0,1] and the
/// given y range; opens the plot group that carries the mapping attributes.
struct Frame {
  double x_origin, x_scale, y_origin, y_scale;

  double x(double rate) const { return x_origin + rate * x_scale; }
  double y(double value) const { return y_origin - value * y_scale; }
};

inline Frame open_frame(Canvas& canvas, const ChartStyle& style, const Range& yr) {
  const double left = canvas.plot_left();
  const double right = canvas.plot_right();
  const double top = canvas.plot_top();
  const double bottom = canvas.plot_bottom();
  const double y_scale = (bottom - top) / (yr.hi - yr.lo);
  const Frame f{left, right - left, bottom + yr.lo * y_scale, y_scale};

  auto& out = canvas.out();
  out << "<g class=\"axes\" stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (int i = 0; i <= 10; i += 2) {
    const double px = f.x(i / 10.0);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px) << "\" y2=\""
        << num(bottom) << "\"/>\n";
  }
  const int ticks = static_cast<int>(std::lround((yr.hi - yr.lo) / yr.step));
  for (int i = 0; i <= ticks; ++i) {
    const double py = f.y(yr.lo + i * yr.step);
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py) << "\" x2=\"" << num(right) << "\" y2=\""
        << num(py) << "\"/>\n";
  }
  out << "</g>\n<g class=\"ticks\" fill=\"#333333\">\n";
  for (int i = 0; i <= 10; i += 2) {
    out << "<text x=\"" << num(f.x(i / 10.0)) << "\" y=\"" << num(bottom + 16) << "\" text-anchor=\"middle\">"
        << tick_label(i / 10.0) << "</text>\n";
  }
  for (int i = 0; i <= ticks; ++i) {
    const double v = yr.lo + i * yr.step;
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(f.y(v) + 4) << "\" text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text class=\"x-label\" x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 38)
      << "\" text-anchor=\"middle\">" << escape(style.x_label) << "</text>\n";
  out << "<text class=\"y-label\" x=\"" << num(left - 44) << "\" y=\"" << num((top + bottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(left - 44) << ' ' << num((top + bottom) / 2)
      << ")\">" << escape(style.y_label) << "</text>\n";
  out << "<g class=\"plot\" data-x-origin=\"" << num(f.x_origin) << "\" data-x-scale=\"" << num(f.x_scale)
      << "\" data-y-origin=\"" << num(f.y_origin) << "\" data-y-scale=\"" << num(f.y_scale) << "\">\n";
  return f;
}

}  // namespace svg

/// One polyline per run of defined points; undefined points split the line.
inline SvgDocument render_curves(const std::vector<RejectCurve>& curves, const ChartStyle& style) {
  for (const auto& curve : curves) {
    if (curve.points.empty()) throw InputError("curve " + curve.metric.name() + " has no points");
    const bool any = std::any_of(curve.points.begin(), curve.points.end(),
                                 [](const CurvePoint& p) { return p.value.has_value(); });
    if (!any) throw InputError("curve " + curve.metric.name() + " has no defined points");
  }

  svg::Canvas canvas(style);
  const auto frame = svg::open_frame(canvas, style, {0.0, 1.0, 0.2});
  auto& out = canvas.out();
  std::vector<std::pair<std::string, std::string>> legend;

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& curve = curves[i];
    const auto color = svg::curve_color(i);
    legend.emplace_back(curve.metric.curve_label(), color);
    out << "<g class=\"curve\" data-metric=\"" << curve.metric.name() << "\" stroke=\"" << color
        << "\" fill=\"none\" stroke-width=\"1.5\">\n";

    std::vector<const CurvePoint*> run;
    const auto flush = [&] {
      if (run.empty()) return;
      out << "<polyline class=\"curve-segment\" points=\"";
      for (std::size_t k = 0; k < run.size(); ++k) {
        if (k) out << ' ';
        out << svg::num(frame.x(run[k]->acceptance_rate)) << ',' << svg::num(frame.y(*run[k]->value));
      }
      out << "\"/>\n";
      if (run.size() == 1) {
        out << "<circle cx=\"" << svg::num(frame.x(run[0]->acceptance_rate)) << "\" cy=\""
            << svg::num(frame.y(*run[0]->value)) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
      }
      run.clear();
    };
    for (const auto& p : curve.points) {
      if (p.value) {
        run.push_back(&p);
      } else {
        flush();
      }
    }
    flush();
    out << "</g>\n";
  }
  out << "</g>\n";
  canvas.legend(legend, false);
  return canvas.finish();
}

/// Filled band per cell between cumulative boundaries, linear between columns.
/// Each band path lists the upper boundary left to right, then the lower
/// boundary right to left.
inline SvgDocument render_stack(const ConfusionStack& stack, const ChartStyle& style) {
  if (stack.columns.empty()) throw InputError("cannot render an empty stack");

  double lo = 0.0;
  double hi = 0.0;
  for (const auto& col : stack.columns) {
    lo = std::min(lo, col.baseline);
    hi = std::max(hi, col.baseline + col.total());
  }
  ChartStyle styled = style;
  if (styled.y_label.empty()) {
    styled.y_label = stack.normalized() ? "share of accepted samples" : "number of accepted samples";
  }

  svg::Canvas canvas(styled);
  const auto frame = svg::open_frame(canvas, styled, svg::nice_range(lo, hi));
  auto& out = canvas.out();

  // Columns sorted by ascending rate for left-to-right paths.
  std::vector<std::size_t> order(stack.columns.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = order.size() - 1 - j;

  const bool single = stack.columns.size() == 1;
  const double half_width = 0.01;
  std::vector<double> xs;
  for (std::size_t j : order) {
    const double rate = stack.columns[j].acceptance_rate;
    if (single) {
      xs.push_back(frame.x(std::max(0.0, rate - half_width)));
      xs.push_back(frame.x(std::min(1.0, rate + half_width)));
    } else {
      xs.push_back(frame.x(rate));
    }
  }
  const std::size_t repeat = single ? 2 : 1;

  std::vector<double> lower(stack.columns.size());
  for (std::size_t j = 0; j < lower.size(); ++j) lower[j] = stack.columns[j].baseline;

  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t k = 0; k < stack.cells.size(); ++k) {
    const auto& cell = stack.cells[k];
    const auto color = svg::cell_color(cell, stack.num_classes);
    legend.emplace_back(cell.label(), color);

    std::vector<double> upper(lower.size());
    for (std::size_t j = 0; j < lower.size(); ++j) upper[j] = lower[j] + stack.columns[j].sizes[k];

    out << "<path class=\"band\" data-cell=\"" << cell.label() << "\" fill=\"" << color << "\" d=\"";
    char cmd = 'M';
    std::size_t xi = 0;
    for (std::size_t j : order) {
      for (std::size_t r = 0; r < repeat; ++r, ++xi) {
        out << cmd << svg::num(xs[xi]) << ',' << svg::num(frame.y(upper[j])) << ' ';
        cmd = 'L';
      }
    }
    for (std::size_t oi = order.size(); oi-- > 0;) {
      const std::size_t j = order[oi];
      for (std::size_t r = 0; r < repeat; ++r) {
        --xi;
        out << 'L' << svg::num(xs[xi]) << ',' << svg::num(frame.y(lower[j])) << ' ';
      }
    }
    out << "Z\"/>\n";
    lower = std::move(upper);
  }
  if (stack.options.align != Align::Bottom) {
    out << "<line class=\"zero\" x1=\"" << svg::num(frame.x(0.0)) << "\" y1=\"" << svg::num(frame.y(0.0))
        << "\" x2=\"" << svg::num(frame.x(1.0)) << "\" y2=\"" << svg::num(frame.y(0.0))
        << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  }
  out << "</g>\n";
  std::reverse(legend.begin(), legend.end());
  canvas.legend(legend, true);
  return canvas.finish();
}

/// Concentric rings, one per column; ring outer radius is proportional to the
/// acceptance rate and its inner radius to the next-lower rate. Within a ring
/// each cell is a sector of angle 2*pi*size, angle 0 centered on the correct
/// block. Requires a normalized, CORRECT_LAST, CORRECT_CENTER stack.
inline SvgDocument render_pie(const ConfusionStack& stack, const ChartStyle& style) {
  if (stack.columns.empty()) throw InputError("cannot render an empty stack");
  if (!stack.options.normalize || stack.options.order != CellOrder::CorrectLast ||
      stack.options.align != Align::CorrectCenter) {
    throw InputError("pie charts need normalize=true, order=correct_last, align=correct_center");
  }

  svg::Canvas canvas(style);
  auto& out = canvas.out();
  const double cx = (canvas.plot_left() + canvas.plot_right()) / 2.0;
  const double cy = (canvas.plot_top() + canvas.plot_bottom()) / 2.0;
  const double radius =
      std::min(canvas.plot_right() - canvas.plot_left(), canvas.plot_bottom() - canvas.plot_top()) / 2.0;
  const auto at = [&](double r, double angle) {
    return svg::num(cx + r * std::cos(angle)) + ',' + svg::num(cy - r * std::sin(angle));
  };
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double max_piece = std::numbers::pi / 2.0;

  out << "<g class=\"pie\" data-cx=\"" << svg::num(cx) << "\" data-cy=\"" << svg::num(cy) << "\" data-radius=\""
      << svg::num(radius) << "\">\n";
  for (std::size_t j = 0; j < stack.columns.size(); ++j) {
    const auto& col = stack.columns[j];
    const double outer = radius * col.acceptance_rate;
    const double inner = j + 1 < stack.columns.size() ? radius * stack.columns[j + 1].acceptance_rate : 0.0;
    out << "<g class=\"ring\" data-ring=\"" << j << "\" data-acceptance-rate=\"" << svg::num(col.acceptance_rate)
        << "\" data-outer=\"" << svg::num(outer) << "\" data-inner=\"" << svg::num(inner) << "\">\n";

    double position = col.baseline;
    for (std::size_t k = 0; k < stack.cells.size(); ++k) {
      const double start = two_pi * position;
      position += col.sizes[k];
      const double end = two_pi * position;
      if (!(end > start)) continue;

      const auto pieces = static_cast<int>(std::ceil((end - start) / max_piece - 1e-12));
      std::vector<double> angles{start};
      for (int p = 1; p < pieces; ++p) angles.push_back(start + (end - start) * p / pieces);
      angles.push_back(end);

      const auto& cell = stack.cells[k];
      out << "<path class=\"sector\" data-cell=\"" << cell.label() << "\" fill=\""
          << svg::cell_color(cell, stack.num_classes) << "\" stroke=\"#ffffff\" stroke-width=\"0.3\" d=\"M"
          << at(outer, angles.front());
      for (std::size_t a = 1; a < angles.size(); ++a) {
        out << " A" << svg::num(outer) << ',' << svg::num(outer) << " 0 0 0 " << at(outer, angles[a]);
      }
      if (inner > 0.0) {
        out << " L" << at(inner, angles.back());
        for (std::size_t a = angles.size() - 1; a-- > 0;) {
          out << " A" << svg::num(inner) << ',' << svg::num(inner) << " 0 0 1 " << at(inner, angles[a]);
        }
      } else {
        out << " L" << svg::num(cx) << ',' << svg::num(cy);
      }
      out << " Z\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<line class=\"zero-angle\" x1=\"" << svg::num(cx) << "\" y1=\"" << svg::num(cy) << "\" x2=\""
      << svg::num(cx + radius) << "\" y2=\"" << svg::num(cy) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out << "</g>\n";

  std::vector<std::pair<std::string, std::string>> legend;
  for (auto it = stack.cells.rbegin(); it != stack.cells.rend(); ++it) {
    legend.emplace_back(it->label(), svg::cell_color(*it, stack.num_classes));
  }
  canvas.legend(legend, true);
  out << "<text class=\"note\" x=\"" << svg::num(canvas.plot_left()) << "\" y=\""
      << svg::num(canvas.plot_bottom() + 30) << "\">radius: acceptance rate, angle: share of accepted samples</text>\n";
  return canvas.finish();
}

}  // namespace score

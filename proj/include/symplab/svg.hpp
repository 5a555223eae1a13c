#pragma once

// Minimal SVG line plots and heatmaps with matching CSV dumps.

#include "symplab/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplab::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<Vec2> points;
  bool dashed = false;
};

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel, double x0, double x1, double y0, double y1)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {}

  void add(Series s) { series_.push_back(std::move(s)); }

  /// Filled cells colored by value; cells are (x, y, value) centers on a regular grid.
  void heatmap(std::vector<std::array<double, 3>> cells, double dx, double dy) {
    cells_ = std::move(cells);
    cell_dx_ = dx;
    cell_dy_ = dy;
  }

  std::string render() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title_ << "</text>\n";
    if (!cells_.empty()) {
      double lo = cells_[0][2], hi = cells_[0][2];
      for (const auto& c : cells_) lo = std::min(lo, c[2]), hi = std::max(hi, c[2]);
      for (const auto& c : cells_) {
        const double w = hi > lo ? (c[2] - lo) / (hi - lo) : 0.5;
        const int r = static_cast<int>(255 * w), b = static_cast<int>(255 * (1 - w));
        os << "<rect x=\"" << fmt(px(c[0] - cell_dx_ / 2)) << "\" y=\"" << fmt(py(c[1] + cell_dy_ / 2)) << "\" width=\""
           << fmt(px(c[0] + cell_dx_ / 2) - px(c[0] - cell_dx_ / 2) + 0.5) << "\" height=\""
           << fmt(py(c[1] - cell_dy_ / 2) - py(c[1] + cell_dy_ / 2) + 0.5) << "\" fill=\"rgb(" << r << ",64," << b
           << ")\"/>\n";
      }
      os << "<text x=\"" << width - margin << "\" y=\"" << margin - 8 << "\" text-anchor=\"end\" font-size=\"11\">range ["
         << fmt(lo) << ", " << fmt(hi) << "]</text>\n";
    }
    // Frame and axes through the origin when visible.
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
       << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (x0_ < 0 && x1_ > 0) {
      os << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << margin << "\" x2=\"" << fmt(px(0)) << "\" y2=\"" << height - margin
         << "\" stroke=\"#bbb\"/>\n";
    }
    if (y0_ < 0 && y1_ > 0) {
      os << "<line x1=\"" << margin << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << width - margin << "\" y2=\"" << fmt(py(0))
         << "\" stroke=\"#bbb\"/>\n";
    }
    for (double t : {0.0, 0.5, 1.0}) {
      const double x = x0_ + t * (x1_ - x0_), y = y0_ + t * (y1_ - y0_);
      os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << height - margin + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
         << fmt(x) << "</text>\n";
      os << "<text x=\"" << margin - 6 << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y)
         << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel_
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << height / 2 << ")\">" << ylabel_ << "</text>\n";
    int row = 0;
    for (const Series& s : series_) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
         << " points=\"";
      for (const Vec2& p : s.points) os << fmt(px(p.x())) << "," << fmt(py(p.y())) << " ";
      os << "\"><title>" << s.label << "</title></polyline>\n";
      const double ly = margin + 16 + 16 * row++;
      os << "<line x1=\"" << margin + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << margin + 34 << "\" y2=\"" << ly - 4
         << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << margin + 40 << "\" y=\"" << ly << "\" font-size=\"12\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
  }

  std::string csv() const {
    std::ostringstream os;
    if (!cells_.empty()) {
      os << "x,y,value\n";
      for (const auto& c : cells_) os << fmt(c[0]) << "," << fmt(c[1]) << "," << fmt(c[2]) << "\n";
      return os.str();
    }
    os << "series,x,y\n";
    for (const Series& s : series_) {
      for (const Vec2& p : s.points) os << '"' << s.label << "\"," << fmt(p.x()) << "," << fmt(p.y()) << "\n";
    }
    return os.str();
  }

  const std::vector<Series>& series() const { return series_; }

  static constexpr int width = 640, height = 520, margin = 60;

 private:
  double px(double x) const { return margin + (x - x0_) / (x1_ - x0_) * (width - 2 * margin); }
  double py(double y) const { return height - margin - (y - y0_) / (y1_ - y0_) * (height - 2 * margin); }

  std::string title_, xlabel_, ylabel_;
  double x0_, x1_, y0_, y1_;
  std::vector<Series> series_;
  std::vector<std::array<double, 3>> cells_;
  double cell_dx_ = 0.0, cell_dy_ = 0.0;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace symplab::svg

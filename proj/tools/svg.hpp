#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace heins::svg {

/// Minimal line/point plot with a fixed viewport and deterministic number formatting.
class Plot {
 public:
  Plot(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void polyline(std::vector<std::pair<double, double>> pts, std::string color, std::string label = {}) {
    series_.push_back({std::move(pts), std::move(color), std::move(label), false});
  }
  void points(std::vector<std::pair<double, double>> pts, std::string color, std::string label = {}) {
    series_.push_back({std::move(pts), std::move(color), std::move(label), true});
  }
  /// Forces the data range to include (x, y).
  void include(double x, double y) { extra_.emplace_back(x, y); }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render();
  }

  std::string render() const {
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    const auto grow = [&](double x, double y) {
      if (!std::isfinite(x) || !std::isfinite(y)) return;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    };
    for (const auto& s : series_) {
      for (auto [x, y] : s.pts) grow(x, y);
    }
    for (auto [x, y] : extra_) grow(x, y);
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double w = 640, h = 480, m = 60;
    const auto px = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
    const auto py = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m); };
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<rect x=\"60\" y=\"60\" width=\"520\" height=\"360\" fill=\"none\" stroke=\"#888\"/>\n";
    s += text(320, 30, title_, "middle", 16) + text(320, 465, x_label_, "middle", 12);
    s += "<text x=\"18\" y=\"240\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 240)\">" + escape(y_label_) + "</text>\n";
    s += text(60, 438, num(x0), "start", 10) + text(580, 438, num(x1), "end", 10);
    s += text(55, 420, num(y0), "end", 10) + text(55, 64, num(y1), "end", 10);
    int legend = 0;
    for (const auto& ser : series_) {
      if (ser.dots) {
        for (auto [x, y] : ser.pts) {
          if (!std::isfinite(x) || !std::isfinite(y)) continue;
          s += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"1.5\" fill=\"" + ser.color + "\"/>\n";
        }
      } else {
        s += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + ser.color + "\" points=\"";
        for (auto [x, y] : ser.pts) {
          if (std::isfinite(x) && std::isfinite(y)) s += num(px(x)) + "," + num(py(y)) + " ";
        }
        s += "\"/>\n";
      }
      if (!ser.label.empty()) {
        const double ly = 80 + 16 * legend++;
        s += "<rect x=\"440\" y=\"" + num(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" + ser.color + "\"/>\n";
        s += text(456, ly, ser.label, "start", 11);
      }
    }
    s += "</svg>\n";
    return s;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Series {
    std::vector<std::pair<double, double>> pts;
    std::string color;
    std::string label;
    bool dots;
  };

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }
  static std::string escape(const std::string& in) {
    std::string out;
    for (char c : in) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }
  static std::string text(double x, double y, const std::string& t, const char* anchor, int size) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(t) + "</text>\n";
  }

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<std::pair<double, double>> extra_;
};

}  // namespace heins::svg

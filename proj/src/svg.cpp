#include "chiral/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chiral::svg {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
};

std::string frame(const std::string& title, const std::string& xl, const std::string& yl,
                  const Range& xr, const Range& yr) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                  "\" height=\"" + fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(title) + "</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  s += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y1) + "\" width=\"" + fmt(x1 - x0) +
       "\" height=\"" + fmt(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 - (y0 - y1) * i / 4.0;
    s += "<text x=\"" + fmt(fx) + "\" y=\"" + fmt(y0 + 16) + "\" text-anchor=\"middle\">" +
         tick(xr.lo + (xr.hi - xr.lo) * i / 4.0) + "</text>\n";
    s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(fy + 4) + "\" text-anchor=\"end\">" +
         tick(yr.lo + (yr.hi - yr.lo) * i / 4.0) + "</text>\n";
  }
  s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 12) +
       "\" text-anchor=\"middle\">" + escape(xl) + "</text>\n";
  s += "<text transform=\"translate(16," + fmt((y0 + y1) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(yl) + "</text>\n";
  return s;
}

double px(double v, const Range& r) {
  return kLeft + (kWidth - kLeft - kRight) * (v - r.lo) / (r.hi - r.lo);
}
double py(double v, const Range& r) {
  return kHeight - kBottom - (kHeight - kBottom - kTop) * (v - r.lo) / (r.hi - r.lo);
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  std::string out = frame(title, x_label, y_label, xr, yr);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += fmt(px(s.x[i], xr)) + "," + fmt(py(s.y[i], yr)) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + fmt(kWidth - kRight - 6) + "\" y=\"" + fmt(kTop + 16 + 14.0 * k) +
           "\" text-anchor=\"end\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::string heat_map(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<double>& x,
                     const std::vector<double>& y, const std::vector<double>& values) {
  Range xr, yr, vr;
  for (double v : x) xr.add(v);
  for (double v : y) yr.add(v);
  for (double v : values) vr.add(v);
  xr.pad();
  yr.pad();
  vr.pad();
  std::string out = frame(title, x_label, y_label, xr, yr);
  const double cw = (kWidth - kLeft - kRight) / double(std::max<std::size_t>(x.size(), 1));
  const double ch = (kHeight - kTop - kBottom) / double(std::max<std::size_t>(y.size(), 1));
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = values[i * x.size() + j];
      const double t = std::isfinite(v) ? (v - vr.lo) / (vr.hi - vr.lo) : 0.0;
      const int r = int(255 * t), b = int(255 * (1 - t));
      char color[16];
      std::snprintf(color, sizeof color, "#%02x40%02x", r, b);
      out += "<rect x=\"" + fmt(kLeft + cw * j) + "\" y=\"" +
             fmt(kHeight - kBottom - ch * (i + 1)) + "\" width=\"" + fmt(cw + 0.5) +
             "\" height=\"" + fmt(ch + 0.5) + "\" fill=\"" + color + "\"/>\n";
    }
  }
  out += "<text x=\"" + fmt(kWidth - kRight) + "\" y=\"" + fmt(kTop - 6) +
         "\" text-anchor=\"end\">" + tick(vr.lo) + " .. " + tick(vr.hi) + "</text>\n";
  return out + "</svg>\n";
}

}  // namespace chiral::svg

#include "mdlb_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mdlb::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void take(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

void draw_panel(std::ostringstream& out, const Panel& p, double left, double width) {
  const double top = 30.0, bottom = kHeight - 45.0;
  const double x0 = left + 55.0, x1 = left + width - 15.0;
  Range rx, ry;
  for (const auto& s : p.series) {
    for (double v : s.x) rx.take(v);
    for (double v : s.y) ry.take(v);
    for (double v : s.lower) ry.take(v);
    for (double v : s.upper) ry.take(v);
  }
  rx.settle();
  ry.settle();
  auto px = [&](double v) { return x0 + (v - rx.lo) / (rx.hi - rx.lo) * (x1 - x0); };
  auto py = [&](double v) { return bottom - (v - ry.lo) / (ry.hi - ry.lo) * (bottom - top); };

  out << "<g class=\"panel\">\n";
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(p.title)
      << "</text>\n";
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(top) << "\" width=\"" << num(x1 - x0) << "\" height=\""
      << num(bottom - top) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double vy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    out << "<text x=\"" << num(px(vx)) << "\" y=\"" << num(bottom + 15) << "\" text-anchor=\"middle\" font-size=\"10\">"
        << tick(vx) << "</text>\n";
    out << "<text x=\"" << num(x0 - 5) << "\" y=\"" << num(py(vy) + 3) << "\" text-anchor=\"end\" font-size=\"10\">"
        << tick(vy) << "</text>\n";
  }
  out << "<text class=\"x-label\" x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.x_label) << "</text>\n";
  out << "<text class=\"y-label\" x=\"" << num(left + 14) << "\" y=\"" << num((top + bottom) / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << num(left + 14) << ' '
      << num((top + bottom) / 2) << ")\">" << escape(p.y_label) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = kColors[k % std::size(kColors)];
    if (!s.lower.empty() && s.lower.size() == s.x.size() && s.upper.size() == s.x.size()) {
      out << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) out << num(px(s.x[i])) << ',' << num(py(s.upper[i])) << ' ';
      for (std::size_t i = s.x.size(); i-- > 0;) out << num(px(s.x[i])) << ',' << num(py(s.lower[i])) << ' ';
      out << "\"/>\n";
    }
    out << "<polyline class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.y[i])) out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 14.0 + 14.0 * static_cast<double>(k);
    out << "<line x1=\"" << num(x1 - 110) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(x1 - 92) << "\" y2=\""
        << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(x1 - 88) << "\" y=\"" << num(ly) << "\" font-size=\"11\">" << escape(s.name)
        << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string line_chart(const std::vector<Panel>& panels) {
  if (panels.empty()) throw std::invalid_argument("line_chart: no panels");
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\" width=\"800\" height=\"400\">\n";
  out << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n";
  const double width = kWidth / static_cast<double>(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) draw_panel(out, panels[i], width * static_cast<double>(i), width);
  out << "</svg>\n";
  return out.str();
}

Series aggregate(const std::string& name, const std::vector<double>& x, const std::vector<std::vector<double>>& runs,
                 bool with_band) {
  Series s;
  s.name = name;
  s.x = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0, sq = 0.0;
    for (const auto& r : runs) {
      sum += r.at(i);
      sq += r.at(i) * r.at(i);
    }
    const double n = static_cast<double>(runs.size());
    const double mean = sum / n;
    s.y.push_back(mean);
    if (with_band) {
      const double sd = n > 1 ? std::sqrt(std::max(sq - n * mean * mean, 0.0) / (n - 1)) : 0.0;
      s.lower.push_back(mean - sd);
      s.upper.push_back(mean + sd);
    }
  }
  return s;
}

}  // namespace mdlb::cli

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "internal.hpp"

namespace skewclust::bench {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                               "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

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

std::string num(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      const double sd = i < s.sd.size() ? s.sd[i] : 0.0;
      y0 = std::min(y0, s.mean[i] - sd);
      y1 = std::max(y1, s.mean[i] + sd);
    }
  }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
      << R"(" font-family="sans-serif" font-size="12">)" << '\n';
  svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  svg << R"(<text x=")" << kWidth / 2 << R"(" y="22" text-anchor="middle" font-size="15">)" << escape(title)
      << "</text>\n";
  svg << R"(<rect x=")" << kLeft << R"(" y=")" << kTop << R"(" width=")" << pw << R"(" height=")" << ph
      << R"(" fill="none" stroke="black"/>)" << '\n';
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0;
    const double yv = y0 + (y1 - y0) * t / 4.0;
    svg << R"(<text x=")" << px(xv) << R"(" y=")" << kTop + ph + 18 << R"(" text-anchor="middle">)" << num(xv)
        << "</text>\n";
    svg << R"(<text x=")" << kLeft - 6 << R"(" y=")" << py(yv) + 4 << R"(" text-anchor="end">)" << num(yv)
        << "</text>\n";
    svg << R"(<line x1=")" << kLeft << R"(" x2=")" << kLeft + pw << R"(" y1=")" << py(yv) << R"(" y2=")" << py(yv)
        << R"(" stroke="#ddd"/>)" << '\n';
  }
  svg << R"(<text x=")" << kLeft + pw / 2 << R"(" y=")" << kHeight - 15 << R"(" text-anchor="middle">)"
      << escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kColors[si % std::size(kColors)];
    svg << R"(<polyline fill="none" stroke=")" << color << R"(" stroke-width="2" points=")";
    for (std::size_t i = 0; i < s.x.size(); ++i) svg << (i ? " " : "") << px(s.x[i]) << ',' << py(s.mean[i]);
    svg << R"("/>)" << '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double sd = i < s.sd.size() ? s.sd[i] : 0.0;
      svg << R"(<line x1=")" << px(s.x[i]) << R"(" x2=")" << px(s.x[i]) << R"(" y1=")" << py(s.mean[i] - sd)
          << R"(" y2=")" << py(s.mean[i] + sd) << R"(" stroke=")" << color << R"("/>)" << '\n';
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(si);
    svg << R"(<line x1=")" << kLeft + pw + 12 << R"(" x2=")" << kLeft + pw + 32 << R"(" y1=")" << ly << R"(" y2=")"
        << ly << R"(" stroke=")" << color << R"(" stroke-width="2"/>)" << '\n';
    svg << R"(<text x=")" << kLeft + pw + 38 << R"(" y=")" << ly + 4 << R"(">)" << escape(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace skewclust::bench

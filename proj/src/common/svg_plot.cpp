#include "common/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "common/util.hpp"

namespace cornerfem {

SvgLogLogPlot::SvgLogLogPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgLogLogPlot::add_series(const std::string& name, const std::vector<double>& x,
                               const std::vector<double>& y, bool fit_slope) {
  series_.push_back({name, x, y, fit_slope});
}

std::string SvgLogLogPlot::str() const {
  const double W = 640, H = 480, ml = 70, mr = 180, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series_)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (s.x[k] <= 0 || s.y[k] <= 0) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  if (xmin >= xmax) xmax = xmin * 10 + 1;
  if (ymin >= ymax) ymax = ymin * 10 + 1;
  double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  lx0 -= 0.05 * (lx1 - lx0 + 1e-9);
  lx1 += 0.05 * (lx1 - lx0);
  ly0 -= 0.05 * (ly1 - ly0 + 1e-9);
  ly1 += 0.05 * (ly1 - ly0);
  auto px = [&](double v) { return ml + (std::log10(v) - lx0) / (lx1 - lx0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (std::log10(v) - ly0) / (ly1 - ly0) * (H - mt - mb); };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title_
      << "</text>\n";
  out << "<text x='" << (ml + (W - ml - mr) / 2) << "' y='" << H - 12
      << "' text-anchor='middle' font-size='12'>" << xlabel_ << "</text>\n";
  out << "<text x='16' y='" << (mt + (H - mt - mb) / 2)
      << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
      << (mt + (H - mt - mb) / 2) << ")'>" << ylabel_ << "</text>\n";
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << (W - ml - mr) << "' height='"
      << (H - mt - mb) << "' fill='none' stroke='black'/>\n";

  // decade grid lines and tick labels
  for (int d = int(std::ceil(lx0)); d <= int(std::floor(lx1)); ++d) {
    double v = std::pow(10.0, d);
    out << "<line x1='" << px(v) << "' y1='" << mt << "' x2='" << px(v) << "' y2='" << (H - mb)
        << "' stroke='#dddddd'/>\n";
    out << "<text x='" << px(v) << "' y='" << H - mb + 16
        << "' text-anchor='middle' font-size='10'>1e" << d << "</text>\n";
  }
  for (int d = int(std::ceil(ly0)); d <= int(std::floor(ly1)); ++d) {
    double v = std::pow(10.0, d);
    out << "<line x1='" << ml << "' y1='" << py(v) << "' x2='" << (W - mr) << "' y2='" << py(v)
        << "' stroke='#dddddd'/>\n";
    out << "<text x='" << ml - 6 << "' y='" << py(v) + 3
        << "' text-anchor='end' font-size='10'>1e" << d << "</text>\n";
  }

  int ci = 0;
  double legend_y = mt + 12;
  for (const auto& s : series_) {
    const char* color = colors[ci++ % 6];
    std::ostringstream path;
    bool first = true;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (s.x[k] <= 0 || s.y[k] <= 0) continue;
      path << (first ? "M" : "L") << px(s.x[k]) << ' ' << py(s.y[k]) << ' ';
      first = false;
      out << "<circle cx='" << px(s.x[k]) << "' cy='" << py(s.y[k]) << "' r='3' fill='" << color
          << "'/>\n";
    }
    out << "<path d='" << path.str() << "' fill='none' stroke='" << color << "'/>\n";

    std::string label = s.name;
    if (s.fit && s.x.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      double n = 0;
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (s.x[k] <= 0 || s.y[k] <= 0) continue;
        double vx = std::log10(s.x[k]), vy = std::log10(s.y[k]);
        sx += vx;
        sy += vy;
        sxx += vx * vx;
        sxy += vx * vy;
        n += 1;
      }
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      double icpt = (sy - slope * sx) / n;
      double fy0 = std::pow(10.0, icpt + slope * std::log10(xmin));
      double fy1 = std::pow(10.0, icpt + slope * std::log10(xmax));
      out << "<path d='M" << px(xmin) << ' ' << py(fy0) << " L" << px(xmax) << ' ' << py(fy1)
          << "' fill='none' stroke='" << color << "' stroke-dasharray='5 4'/>\n";
      char buf[64];
      std::snprintf(buf, sizeof(buf), " (slope %.3f)", slope);
      label += buf;
    }
    out << "<line x1='" << W - mr + 10 << "' y1='" << legend_y << "' x2='" << W - mr + 28
        << "' y2='" << legend_y << "' stroke='" << color << "'/>\n";
    out << "<text x='" << W - mr + 32 << "' y='" << legend_y + 4 << "' font-size='11'>" << label
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  return out.str();
}

void SvgLogLogPlot::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << str();
}

}  // namespace cornerfem

#include "sawdil/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "sawdil/errors.hpp"
#include "sawdil/text.hpp"

namespace sawdil {
namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(t);
  return out;
}

std::string tick_label(double v, double step) {
  const int digits = step >= 1 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  if (std::fabs(v) < 1e-12 * step) v = 0.0;
  return fixed(v, std::min(digits, 8));
}

}  // namespace

void write_svg_plot(std::ostream& os, std::span<const PlotSeries> series, const PlotOptions& opt) {
  if (series.empty()) throw InvalidArgument("nothing to plot");
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) throw InvalidArgument("series '" + s.label + "' is empty or ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.04 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double left = 70;
  const double right = 20;
  const double top = 40;
  const double bottom = 50;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(opt.title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const std::vector<double> xt = ticks(xmin, xmax);
  const std::vector<double> yt = ticks(ymin, ymax);
  const double xstep = xt.size() > 1 ? xt[1] - xt[0] : 1.0;
  const double ystep = yt.size() > 1 ? yt[1] - yt[0] : 1.0;
  for (double t : xt) {
    os << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(t)) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fixed(px(t)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << tick_label(t, xstep) << "</text>\n";
  }
  for (double t : yt) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(t)) << "\" x2=\"" << left << "\" y2=\""
       << fixed(py(t)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(t) + 4) << "\" text-anchor=\"end\">"
       << tick_label(t, ystep) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 10 << "\" text-anchor=\"middle\">"
     << escape(opt.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    const std::size_t stride = std::max<std::size_t>(1, (s.x.size() + opt.max_points - 1) / opt.max_points);
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); i += stride) {
        os << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\"2.5\" fill=\""
           << color << "\"/>\n";
      }
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); i += stride) {
        os << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i])) << ' ';
      }
      os << fixed(px(s.x.back())) << ',' << fixed(py(s.y.back())) << "\"/>\n";
    }
    const double ly = top + 16 + 16.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + 30 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << left + 36 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

CdfTable read_cdf_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "param,empirical,analytic,diff,stderr") {
    throw IoError("comparison CSV has an unexpected header");
  }
  CdfTable t;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw IoError("comparison CSV row has " + std::to_string(f.size()) + " fields");
    t.param.push_back(parse_double(f[0], "param"));
    t.empirical.push_back(parse_double(f[1], "empirical"));
    t.analytic.push_back(parse_double(f[2], "analytic"));
    t.diff.push_back(parse_double(f[3], "diff"));
    t.error.push_back(parse_double(f[4], "stderr"));
  }
  if (t.param.empty()) throw IoError("comparison CSV has no rows");
  return t;
}

}  // namespace sawdil

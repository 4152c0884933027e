#include "mcflab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcflab/numeric.hpp"

namespace mcflab {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 72, kRight = 24, kTop = 48, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  std::vector<double> ticks;

  double to_unit(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) /
                    (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
};

Axis make_axis(double lo, double hi, bool log) {
  Axis ax;
  ax.log = log;
  if (log) {
    lo = std::max(lo, 1e-300);
    hi = std::max(hi, lo * 10);
    const int e0 = static_cast<int>(std::floor(std::log10(lo)));
    const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
    ax.lo = std::pow(10.0, e0);
    ax.hi = std::pow(10.0, e1);
    for (int e = e0; e <= e1; ++e) ax.ticks.push_back(std::pow(10.0, e));
  } else {
    if (hi <= lo) hi = lo + 1;
    const double span = hi - lo;
    const double raw = span / 6;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    ax.lo = std::floor(lo / step) * step;
    ax.hi = std::ceil(hi / step) * step;
    for (double t = ax.lo; t <= ax.hi + 0.5 * step; t += step)
      ax.ticks.push_back(t);
  }
  return ax;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec,
                             const std::vector<PlotSeries>& series) {
  if (series.empty()) throw Error("render_line_plot: no series");
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw Error("render_line_plot: empty or mismatched series '" + s.label +
                  "'");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (spec.logx && s.x[i] <= 0)
        throw Error("render_line_plot: nonpositive x on a log axis");
      if (spec.logy && s.y[i] <= 0) continue;  // dropped below
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!(ylo <= yhi)) throw Error("render_line_plot: no plottable points");
  const Axis xax = make_axis(xlo, xhi, spec.logx);
  const Axis yax = make_axis(ylo, yhi, spec.logy);

  auto px = [&](double v) {
    return kLeft + xax.to_unit(v) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double v) {
    return kHeight - kBottom - yax.to_unit(v) * (kHeight - kTop - kBottom);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // frame and ticks
  os << "<g stroke=\"#333333\" fill=\"none\" stroke-width=\"1\">"
     << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
     << fmt(kWidth - kLeft - kRight) << "\" height=\""
     << fmt(kHeight - kTop - kBottom) << "\"/></g>\n";
  os << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#333333\">\n";
  for (double t : xax.ticks) {
    const double x = px(t);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kHeight - kBottom)
       << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(kHeight - kBottom + 5)
       << "\" stroke=\"#333333\"/>";
    os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kHeight - kBottom + 18)
       << "\" text-anchor=\"middle\">" << fmt_tick(t) << "</text>\n";
  }
  for (double t : yax.ticks) {
    const double y = py(t);
    os << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(y)
       << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(y)
       << "\" stroke=\"#333333\"/>";
    os << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
       << "\" text-anchor=\"end\">" << fmt_tick(t) << "</text>\n";
  }
  std::string title = spec.title;
  if (spec.annotate_slope) {
    // least-squares log-log slope across all series points
    std::vector<double> xs, ys;
    for (const auto& s : series)
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (s.x[i] > 0 && s.y[i] > 0) {
          xs.push_back(s.x[i]);
          ys.push_back(s.y[i]);
        }
      }
    if (xs.size() >= 2)
      title += " [log-log slope " + format_sig(loglog_slope(xs, ys), 3) + "]";
  }
  os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kTop - 16)
     << "\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 12)
     << "\" text-anchor=\"middle\">" << spec.xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << fmt(kHeight / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << fmt(kHeight / 2) << ")\">" << spec.ylabel << "</text>\n";
  os << "</g>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 8];
    std::ostringstream path;
    bool pen_up = true;
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (spec.logy && series[s].y[i] <= 0) {
        pen_up = true;
        continue;
      }
      path << (pen_up ? "M" : "L") << fmt(px(series[s].x[i])) << " "
           << fmt(py(series[s].y[i]));
      pen_up = false;
    }
    os << "<path d=\"" << path.str() << "\" stroke=\"" << color
       << "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (spec.logy && series[s].y[i] <= 0) continue;
      os << "<circle cx=\"" << fmt(px(series[s].x[i])) << "\" cy=\""
         << fmt(py(series[s].y[i])) << "\" r=\"2.5\" fill=\"" << color
         << "\"/>\n";
    }
    os << "<text x=\"" << fmt(kLeft + 10) << "\" y=\""
       << fmt(kTop + 16 + 16 * static_cast<double>(s)) << "\" fill=\"" << color
       << "\" font-family=\"monospace\" font-size=\"12\">" << series[s].label
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_histogram(const std::string& title,
                             const std::vector<double>& values, int bins) {
  if (values.empty()) throw Error("render_histogram: no values");
  if (bins < 1) throw Error("render_histogram: bins must be positive");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1;
  std::vector<double> counts(static_cast<size_t>(bins), 0.0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    counts[static_cast<size_t>(b)] += 1.0;
  }
  PlotSeries s;
  s.label = "count";
  for (int b = 0; b < bins; ++b) {
    s.x.push_back(lo + (b + 0.5) * (hi - lo) / bins);
    s.y.push_back(counts[static_cast<size_t>(b)]);
  }
  PlotSpec spec;
  spec.title = title;
  spec.xlabel = "value";
  spec.ylabel = "count";
  return render_line_plot(spec, {s});
}

}  // namespace mcflab

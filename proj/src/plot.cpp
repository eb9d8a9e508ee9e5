#include "kscars/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kscars/error.hpp"

namespace kscars {

namespace {

constexpr const char* kPalette[] = {"#c0392b", "#2c6fbb", "#27864a", "#8e44ad",
                                    "#d4820f", "#16a0a0", "#6d4c41", "#555555"};

std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
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

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

std::vector<double> ticks(Range& r) {
  const double step = nice_step(r.hi - r.lo);
  r.lo = std::floor(r.lo / step + 1e-9) * step;
  r.hi = std::ceil(r.hi / step - 1e-9) * step;
  std::vector<double> out;
  for (double v = r.lo; v <= r.hi + 0.5 * step; v += step)
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

}  // namespace

std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
  require(spec.width >= 200 && spec.height >= 150, ErrorKind::Configuration, "plot too small");
  const bool has_series = !spec.line_columns.empty() || !spec.scatter_columns.empty();
  require(!has_series || !spec.x_column.empty(), ErrorKind::Configuration,
          "plot needs an x column");
  const std::vector<double> empty;
  const auto& xs = has_series ? table.column(spec.x_column) : empty;

  struct Series {
    std::string name;
    const std::vector<double>* ys;
    bool scatter;
  };
  std::vector<Series> series;
  for (const auto& c : spec.line_columns) series.push_back({c, &table.column(c), false});
  for (const auto& c : spec.scatter_columns) series.push_back({c, &table.column(c), true});

  Range rx, ry;
  for (double x : xs) rx.add(x);
  for (const auto& s : series)
    for (double y : *s.ys) ry.add(y);
  rx.settle();
  ry.settle();
  const auto xt = ticks(rx);
  const auto yt = ticks(ry);

  const double left = 70, right = 150, top = 40, bottom = 55;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;
  auto px = [&](double x) { return left + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
       "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " + std::to_string(spec.height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    o += "<text x=\"" + num("%.2f", left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";

  o += "<g stroke=\"#000\" fill=\"none\">\n";
  o += "<rect x=\"" + num("%.2f", left) + "\" y=\"" + num("%.2f", top) + "\" width=\"" +
       num("%.2f", pw) + "\" height=\"" + num("%.2f", ph) + "\"/>\n";
  for (double v : xt)
    o += "<line x1=\"" + num("%.2f", px(v)) + "\" y1=\"" + num("%.2f", top + ph) + "\" x2=\"" +
         num("%.2f", px(v)) + "\" y2=\"" + num("%.2f", top + ph + 5) + "\"/>\n";
  for (double v : yt)
    o += "<line x1=\"" + num("%.2f", left - 5) + "\" y1=\"" + num("%.2f", py(v)) + "\" x2=\"" +
         num("%.2f", left) + "\" y2=\"" + num("%.2f", py(v)) + "\"/>\n";
  o += "</g>\n<g fill=\"#000\">\n";
  for (double v : xt)
    o += "<text x=\"" + num("%.2f", px(v)) + "\" y=\"" + num("%.2f", top + ph + 18) +
         "\" text-anchor=\"middle\">" + num("%g", v) + "</text>\n";
  for (double v : yt)
    o += "<text x=\"" + num("%.2f", left - 8) + "\" y=\"" + num("%.2f", py(v) + 4) +
         "\" text-anchor=\"end\">" + num("%g", v) + "</text>\n";
  const std::string xl = spec.x_label.empty() ? spec.x_column : spec.x_label;
  if (!xl.empty())
    o += "<text x=\"" + num("%.2f", left + pw / 2) + "\" y=\"" + num("%.2f", top + ph + 40) +
         "\" text-anchor=\"middle\">" + escape(xl) + "</text>\n";
  if (!spec.y_label.empty())
    o += "<text transform=\"translate(18," + num("%.2f", top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";
  o += "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    if (s.scatter) {
      o += "<g fill=\"" + color + "\">\n";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = (*s.ys)[i];
        if (!std::isfinite(xs[i]) || !std::isfinite(y)) continue;
        o += "<circle cx=\"" + num("%.2f", px(xs[i])) + "\" cy=\"" + num("%.2f", py(y)) +
             "\" r=\"3\"/>\n";
      }
      o += "</g>\n";
    } else {
      std::string pts;
      auto flush = [&] {
        if (!pts.empty())
          o += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
               pts + "\"/>\n";
        pts.clear();
      };
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = (*s.ys)[i];
        if (!std::isfinite(xs[i]) || !std::isfinite(y)) {
          flush();
          continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += num("%.2f", px(xs[i])) + "," + num("%.2f", py(y));
      }
      flush();
    }
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    const double lx = left + pw + 12;
    if (s.scatter)
      o += "<circle cx=\"" + num("%.2f", lx + 10) + "\" cy=\"" + num("%.2f", ly) + "\" r=\"3\" fill=\"" +
           color + "\"/>\n";
    else
      o += "<line x1=\"" + num("%.2f", lx) + "\" y1=\"" + num("%.2f", ly) + "\" x2=\"" +
           num("%.2f", lx + 20) + "\" y2=\"" + num("%.2f", ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    o += "<text x=\"" + num("%.2f", lx + 26) + "\" y=\"" + num("%.2f", ly + 4) + "\">" +
         escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace kscars

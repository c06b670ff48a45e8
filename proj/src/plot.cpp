#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "mixedtrails/io.hpp"

namespace mixedtrails::io {

namespace {

// to_chars keeps the output independent of any host-application locale
std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
}

std::string fmt_tick(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string render_curves_svg(const ResultsTable& table, bool log_x) {
  if (table.rows.empty()) throw ParseError("empty results table, nothing to plot");

  // group rows by hypothesis, preserving first-appearance order
  std::vector<std::string> names;
  std::map<std::string, std::vector<const ResultRow*>> curves;
  for (const ResultRow& row : table.rows) {
    auto [it, inserted] = curves.try_emplace(row.hypothesis);
    if (inserted) names.push_back(row.hypothesis);
    it->second.push_back(&row);
  }
  for (auto& [name, rows] : curves)
    std::sort(rows.begin(), rows.end(),
              [](const ResultRow* a, const ResultRow* b) { return a->kappa < b->kappa; });

  double kappa_min = 0.0, kappa_max = 0.0, pos_min = 0.0;
  double y_min = 0.0, y_max = 0.0;
  bool first = true, any_pos = false;
  for (const ResultRow& row : table.rows) {
    const double se = row.std_err.value_or(0.0);
    if (first) {
      kappa_min = kappa_max = row.kappa;
      y_min = row.log_ml - 3 * se;
      y_max = row.log_ml + 3 * se;
      first = false;
    } else {
      kappa_min = std::min(kappa_min, row.kappa);
      kappa_max = std::max(kappa_max, row.kappa);
      y_min = std::min(y_min, row.log_ml - 3 * se);
      y_max = std::max(y_max, row.log_ml + 3 * se);
    }
    if (row.kappa > 0.0) {
      pos_min = any_pos ? std::min(pos_min, row.kappa) : row.kappa;
      any_pos = true;
    }
  }
  if (y_max == y_min) {
    y_max += 1.0;
    y_min -= 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 880, height = 520;
  const double ml = 80, mr = 200, mt = 20, mb = 55;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;

  auto x_of = [&](double kappa) {
    if (log_x && any_pos && pos_min < kappa_max) {
      // kappa = 0 pinned to the left edge, positive kappas on a log scale
      const double lo = std::log10(pos_min), hi = std::log10(kappa_max);
      if (kappa <= 0.0) return ml;
      return ml + (std::log10(kappa) - lo) / (hi - lo) * plot_w;
    }
    if (kappa_max == kappa_min) return ml + plot_w / 2;
    return ml + (kappa - kappa_min) / (kappa_max - kappa_min) * plot_w;
  };
  auto y_of = [&](double v) { return mt + (y_max - v) / (y_max - y_min) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
         fmt(mt + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + plot_h) + "\" x2=\"" + fmt(ml + plot_w) +
         "\" y2=\"" + fmt(mt + plot_h) + "\" stroke=\"black\"/>\n";

  // x ticks at the distinct kappas (capped to avoid clutter)
  std::vector<double> kappas;
  for (const ResultRow& row : table.rows) kappas.push_back(row.kappa);
  std::sort(kappas.begin(), kappas.end());
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
  const std::size_t stride = kappas.size() > 14 ? kappas.size() / 14 + 1 : 1;
  for (std::size_t i = 0; i < kappas.size(); i += stride) {
    const double x = x_of(kappas[i]);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt + plot_h) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(mt + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(mt + plot_h + 20) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + fmt_tick(kappas[i]) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(ml + plot_w / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">concentration factor kappa" +
         std::string(log_x ? " (log scale)" : "") + "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = y_min + (y_max - y_min) * i / 5.0;
    const double y = y_of(v);
    svg += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
           fmt(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + fmt_tick(v) + "</text>\n";
  }
  svg += "<text x=\"16\" y=\"" + fmt(mt + plot_h / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 16 " + fmt(mt + plot_h / 2) + ")\">log marginal likelihood</text>\n";

  // bands first so curves draw on top
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto& rows = curves[names[c]];
    const char* color = kPalette[c % 10];
    bool has_band = false;
    for (const ResultRow* row : rows)
      if (row->std_err.value_or(0.0) > 0.0) has_band = true;
    if (!has_band) continue;
    std::string pts;
    for (const ResultRow* row : rows)
      pts += fmt(x_of(row->kappa)) + "," + fmt(y_of(row->log_ml + 3 * row->std_err.value_or(0.0))) + " ";
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
      pts += fmt(x_of((*it)->kappa)) + "," + fmt(y_of((*it)->log_ml - 3 * (*it)->std_err.value_or(0.0))) + " ";
    svg += "<polygon class=\"band\" points=\"" + pts + "\" fill=\"" + color +
           "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }

  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto& rows = curves[names[c]];
    const char* color = kPalette[c % 10];
    std::string pts;
    for (const ResultRow* row : rows)
      pts += fmt(x_of(row->kappa)) + "," + fmt(y_of(row->log_ml)) + " ";
    svg += "<polyline class=\"curve\" points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.8\"/>\n";
  }

  // legend
  for (std::size_t c = 0; c < names.size(); ++c) {
    const double y = mt + 14 + 18 * static_cast<double>(c);
    const char* color = kPalette[c % 10];
    svg += "<line x1=\"" + fmt(ml + plot_w + 12) + "\" y1=\"" + fmt(y - 4) + "\" x2=\"" +
           fmt(ml + plot_w + 34) + "\" y2=\"" + fmt(y - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(ml + plot_w + 40) + "\" y=\"" + fmt(y) +
           "\" font-size=\"12\">" + names[c] + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace mixedtrails::io

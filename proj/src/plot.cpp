// Copyright 2026 The llrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llrkit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "llrkit/errors.hpp"
#include "llrkit/numeric.hpp"
#include "llrkit/rocch.hpp"
#include "llrkit/score_io.hpp"

namespace llrkit {

double det_warp(double p, std::int64_t n) {
  if (n < 1) throw InvalidArgument("DET warp needs a positive trial count");
  const double lo = 0.5 / static_cast<double>(n);
  return probit(std::clamp(p, lo, 1.0 - lo));
}

DetCurve det_curve(const LabeledScores& scores, DetStyle style) {
  const RocchCurve c = style == DetStyle::Rocch ? rocch(scores) : steppy_roc(scores);
  DetCurve out;
  out.style = style;
  out.p_miss = c.p_miss;
  out.p_fa = c.p_fa;
  out.x = c.p_fa.unaryExpr([&](double p) { return det_warp(p, c.nontargets); });
  out.y = c.p_miss.unaryExpr([&](double p) { return det_warp(p, c.targets); });
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c.miss_count(k) >= kRuleOfThirty) out.dr30_miss = DetPoint{out.x(k), out.y(k)};
    if (!out.dr30_fa && c.fa_count(k) >= kRuleOfThirty) out.dr30_fa = DetPoint{out.x(k), out.y(k)};
  }
  return out;
}

NberPlotData nber_curve(const LabeledScores& llrs, const Eigen::VectorXd& x_grid, bool include_min) {
  if (llrs.tar.size() == 0 || llrs.non.size() == 0) {
    throw DegenerateInput("Bayes error plot needs target and non-target LLRs");
  }
  if (x_grid.size() == 0) throw InvalidArgument("Bayes error plot needs a non-empty grid");
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    if (!std::isfinite(x_grid(i))) throw InvalidArgument("grid points must be finite");
    if (i > 0 && !(x_grid(i) > x_grid(i - 1))) throw InvalidArgument("grid must be strictly ascending");
  }

  NberPlotData out;
  out.x_grid = x_grid;
  const Eigen::Index n = x_grid.size();
  out.actual.resize(n);
  out.miss_contrib.resize(n);
  out.fa_contrib.resize(n);

  std::vector<double> thresholds(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) thresholds[static_cast<std::size_t>(i)] = -x_grid(i);
  const auto rates = fast_error_rate_sweep(llrs, thresholds);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pt = logistic(x_grid(i));
    const double norm = default_bayes_error(pt);
    const ErrorRates& r = rates[static_cast<std::size_t>(i)];
    out.miss_contrib(i) = pt * r.p_miss / norm;
    out.fa_contrib(i) = (1.0 - pt) * r.p_fa / norm;
    out.actual(i) = out.miss_contrib(i) + out.fa_contrib(i);
  }

  const RocchCurve hull = rocch(llrs);
  if (include_min) {
    out.minimum.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.minimum(i) = min_bayes_error(hull, logistic(x_grid(i))).normalized;
  }
  out.dr30 = dr30_markers(hull, std::span<const double>(x_grid.data(), static_cast<std::size_t>(n)));
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
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

// Maps data coordinates into the plotting rectangle.
struct Frame {
  double left, top, width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

Frame make_frame(const SvgOptions& o, double x0, double x1, double y0, double y1) {
  const double left = 70, right = 20, top = o.title.empty() ? 20 : 40, bottom = 50;
  return {left, top, std::max(1.0, o.width - left - right), std::max(1.0, o.height - top - bottom), x0, x1, y0, y1};
}

void open_document(std::string& s, const SvgOptions& o, const Frame& f) {
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(o.width) + "\" height=\"" +
       std::to_string(o.height) + "\" viewBox=\"0 0 " + std::to_string(o.width) + " " + std::to_string(o.height) +
       "\">\n";
  s += "<defs><clipPath id=\"plot-area\"><rect x=\"" + fmt(f.left) + "\" y=\"" + fmt(f.top) + "\" width=\"" +
       fmt(f.width) + "\" height=\"" + fmt(f.height) + "\"/></clipPath></defs>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(o.width) + "\" height=\"" + std::to_string(o.height) +
       "\" fill=\"white\"/>\n";
  s += "<rect class=\"axes\" x=\"" + fmt(f.left) + "\" y=\"" + fmt(f.top) + "\" width=\"" + fmt(f.width) +
       "\" height=\"" + fmt(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string font = "font-family=\"sans-serif\" font-size=\"12\"";
  if (!o.title.empty()) {
    s += "<text x=\"" + fmt(f.left + f.width / 2) + "\" y=\"24\" text-anchor=\"middle\" " + font + ">" +
         xml_escape(o.title) + "</text>\n";
  }
  s += "<text x=\"" + fmt(f.left + f.width / 2) + "\" y=\"" + fmt(o.height - 10.0) + "\" text-anchor=\"middle\" " +
       font + ">" + xml_escape(o.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(f.top + f.height / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(f.top + f.height / 2) + ")\" " + font + ">" + xml_escape(o.y_label) + "</text>\n";
}

void x_tick(std::string& s, const Frame& f, double x, const std::string& text) {
  const double px = f.px(x);
  const double bottom = f.top + f.height;
  s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(px) + "\" y2=\"" + fmt(bottom + 5) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(bottom + 18) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + text + "</text>\n";
}

void y_tick(std::string& s, const Frame& f, double y, const std::string& text) {
  const double py = f.py(y);
  s += "<line x1=\"" + fmt(f.left - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(f.left) + "\" y2=\"" + fmt(py) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt(f.left - 8) + "\" y=\"" + fmt(py + 3) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + text + "</text>\n";
}

void polyline(std::string& s, const Frame& f, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
              const std::string& color, const std::string& dash, const std::string& cls) {
  s += "<polyline class=\"" + cls + "\" clip-path=\"url(#plot-area)\" fill=\"none\" stroke=\"" + xml_escape(color) +
       "\" stroke-width=\"1.5\"";
  if (!dash.empty()) s += " stroke-dasharray=\"" + dash + "\"";
  s += " points=\"";
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fmt(f.px(xs(i))) + "," + fmt(f.py(ys(i)));
  }
  s += "\"/>\n";
}

void triangle(std::string& s, double px, double py, const std::string& color) {
  s += "<polygon class=\"dr30\" points=\"" + fmt(px) + "," + fmt(py - 6) + " " + fmt(px - 5) + "," + fmt(py + 4) +
       " " + fmt(px + 5) + "," + fmt(py + 4) + "\" fill=\"" + xml_escape(color) + "\"/>\n";
}

void asterisk(std::string& s, double px, double py, const std::string& color) {
  std::string d;
  for (int k = 0; k < 3; ++k) {
    const double a = k * M_PI / 3.0;
    const double dx = 6 * std::cos(a), dy = 6 * std::sin(a);
    d += "M" + fmt(px - dx) + "," + fmt(py - dy) + "L" + fmt(px + dx) + "," + fmt(py + dy);
  }
  s += "<path class=\"dr30\" d=\"" + d + "\" stroke=\"" + xml_escape(color) + "\" stroke-width=\"1.5\"/>\n";
}

const std::string& color_for(const SvgOptions& o, std::size_t i) {
  static const std::string black = "black";
  return o.colors.empty() ? black : o.colors[i % o.colors.size()];
}

std::string short_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string percent_label(double p) { return short_label(p * 100.0); }

}  // namespace

std::string render_svg(const std::vector<DetCurve>& curves, const SvgOptions& opts) {
  if (!(opts.det_min_p > 0.0 && opts.det_min_p < opts.det_max_p && opts.det_max_p < 1.0)) {
    throw InvalidArgument("DET axis limits must satisfy 0 < min < max < 1");
  }
  const double lo = probit(opts.det_min_p);
  const double hi = probit(opts.det_max_p);
  const Frame f = make_frame(opts, lo, hi, lo, hi);
  SvgOptions o = opts;
  if (o.x_label.empty()) o.x_label = "False alarm probability (%)";
  if (o.y_label.empty()) o.y_label = "Miss probability (%)";

  std::string s;
  open_document(s, o, f);
  for (double p : {1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99}) {
    if (p < opts.det_min_p || p > opts.det_max_p) continue;
    x_tick(s, f, probit(p), percent_label(p));
    y_tick(s, f, probit(p), percent_label(p));
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const DetCurve& c = curves[i];
    const std::string& color = color_for(o, i);
    polyline(s, f, c.x, c.y, color, c.style == DetStyle::Steppy ? "4,3" : "",
             c.style == DetStyle::Steppy ? "det-steppy" : "det-rocch");
    if (c.dr30_miss) asterisk(s, f.px(c.dr30_miss->x), f.py(c.dr30_miss->y), color);
    if (c.dr30_fa) asterisk(s, f.px(c.dr30_fa->x), f.py(c.dr30_fa->y), color);
  }
  s += "</svg>\n";
  return s;
}

std::string render_svg(const std::vector<NberPlotData>& plots, const SvgOptions& opts) {
  double x0 = -10.0, x1 = 0.0;
  bool have = false;
  for (const auto& p : plots) {
    if (p.size() == 0) continue;
    x0 = have ? std::min(x0, p.x_grid(0)) : p.x_grid(0);
    x1 = have ? std::max(x1, p.x_grid(p.size() - 1)) : p.x_grid(p.size() - 1);
    have = true;
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  const double y_max = opts.nber_y_max > 0.0 ? opts.nber_y_max : 1.2;
  const Frame f = make_frame(opts, x0, x1, 0.0, y_max);
  SvgOptions o = opts;
  if (o.x_label.empty()) o.x_label = "logit prior";
  if (o.y_label.empty()) o.y_label = "normalized Bayes error-rate";

  std::string s;
  open_document(s, o, f);
  const double step = std::max(1.0, std::ceil((x1 - x0) / 10.0));
  for (double x = std::ceil(x0 / step) * step; x <= x1 + 1e-12; x += step) x_tick(s, f, x, short_label(x));
  for (double y = 0.0; y <= y_max + 1e-12; y += 0.2) y_tick(s, f, y, fmt(y));

  // Default system reference.
  s += "<line class=\"default\" x1=\"" + fmt(f.px(x0)) + "\" y1=\"" + fmt(f.py(1.0)) + "\" x2=\"" + fmt(f.px(x1)) +
       "\" y2=\"" + fmt(f.py(1.0)) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  for (std::size_t i = 0; i < plots.size(); ++i) {
    const NberPlotData& p = plots[i];
    if (p.size() == 0) continue;
    const std::string& color = color_for(o, i);
    polyline(s, f, p.x_grid, p.actual, color, "", "actual");
    if (p.has_minimum()) polyline(s, f, p.x_grid, p.minimum, color, "6,4", "minimum");
    polyline(s, f, p.x_grid, p.miss_contrib, color, "2,3", "miss");
    polyline(s, f, p.x_grid, p.fa_contrib, color, "8,3,2,3", "fa");
    const Eigen::VectorXd& ref = p.has_minimum() ? p.minimum : p.actual;
    for (const auto& m : {p.dr30.x_miss30, p.dr30.x_fa30}) {
      if (!m) continue;
      Eigen::Index k = 0;
      while (k + 1 < p.size() && p.x_grid(k) < *m) ++k;
      triangle(s, f.px(*m), f.py(std::min(ref(k), y_max)), color);
    }
    for (double x : p.operating_points) {
      s += "<line class=\"opoint\" x1=\"" + fmt(f.px(x)) + "\" y1=\"" + fmt(f.top) + "\" x2=\"" + fmt(f.px(x)) +
           "\" y2=\"" + fmt(f.top + f.height) + "\" stroke=\"magenta\" stroke-dasharray=\"5,4\"" +
           " clip-path=\"url(#plot-area)\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

namespace {

void csv_row(std::string& s, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    first = false;
    append_real(s, v);
  }
  s += '\n';
}

}  // namespace

std::string emit_csv(const DetCurve& c) {
  std::string s = "p_miss,p_fa,probit_p_miss,probit_p_fa\n";
  for (Eigen::Index i = 0; i < c.size(); ++i) csv_row(s, {c.p_miss(i), c.p_fa(i), c.y(i), c.x(i)});
  return s;
}

std::string emit_csv(const NberPlotData& p) {
  const bool with_min = p.has_minimum();
  std::string s = with_min ? "x,actual,minimum,miss_contrib,fa_contrib\n" : "x,actual,miss_contrib,fa_contrib\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (with_min) {
      csv_row(s, {p.x_grid(i), p.actual(i), p.minimum(i), p.miss_contrib(i), p.fa_contrib(i)});
    } else {
      csv_row(s, {p.x_grid(i), p.actual(i), p.miss_contrib(i), p.fa_contrib(i)});
    }
  }
  return s;
}

}  // namespace llrkit

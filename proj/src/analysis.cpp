// Copyright 2026 The lengthgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "lengthgen/errors.hpp"
#include "lengthgen/harness.hpp"

namespace lengthgen::harness {

namespace {

std::string available_metrics() {
  std::string s;
  for (const auto& name : metric_names()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

AccuracyTable accuracy_by(std::span<const EvalRecord> records, std::string_view metric) {
  const auto& names = metric_names();
  if (std::find(names.begin(), names.end(), metric) == names.end())
    throw ConfigError("unknown metric '" + std::string(metric) + "'; available: " + available_metrics());

  std::map<std::int64_t, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) {
    if (!r.scored) continue;
    const auto value = metric_value(r.metrics, metric);
    if (!value)
      throw ConfigError("metric '" + std::string(metric) + "' is not defined for record '" + r.instance_id +
                        "'; available: " + available_metrics());
    groups[*value].push_back(&r);
  }

  AccuracyTable table;
  table.metric = std::string(metric);
  for (const auto& [value, group] : groups) {
    AccuracyRow row;
    row.value = value;
    row.n = group.size();
    std::size_t correct = 0;
    bool has_steps = true;
    double step_sum = 0.0;
    double steps_total = 0.0;
    std::int64_t min_steps = group.front()->metrics.num_steps;
    std::vector<std::size_t> leading_correct;
    for (const EvalRecord* r : group) {
      correct += r->final_correct ? 1 : 0;
      steps_total += static_cast<double>(r->metrics.num_steps);
      has_steps = has_steps && r->style == PromptStyle::kScratchpad;
      min_steps = std::min(min_steps, r->metrics.num_steps);
      const auto good = static_cast<double>(std::count(r->step_correct.begin(), r->step_correct.end(), true));
      step_sum += r->metrics.num_steps > 0 ? good / static_cast<double>(r->metrics.num_steps) : 1.0;
      std::size_t lead = 0;
      while (lead < r->step_correct.size() && r->step_correct[lead]) ++lead;
      leading_correct.push_back(lead);
    }
    const double n = static_cast<double>(row.n);
    row.final_acc = static_cast<double>(correct) / n;
    row.mean_steps = steps_total / n;
    if (has_steps) {
      row.step_acc = step_sum / n;
      for (std::int64_t k = 1; k <= min_steps; ++k) {
        const auto hits = std::count_if(leading_correct.begin(), leading_correct.end(),
                                        [k](std::size_t lead) { return static_cast<std::int64_t>(lead) >= k; });
        row.prefix.push_back(static_cast<double>(hits) / n);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_table_csv(const AccuracyTable& table, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& row : table.rows) width = std::max(width, row.prefix.size());
  out << "metric,value,n,final_acc,step_acc";
  for (std::size_t k = 1; k <= width; ++k) out << ",prefix_" << k;
  out << '\n';
  for (const auto& row : table.rows) {
    out << table.metric << ',' << row.value << ',' << row.n << ',' << fmt(row.final_acc) << ',';
    if (row.step_acc) out << fmt(*row.step_acc);
    for (std::size_t k = 0; k < width; ++k) {
      out << ',';
      if (k < row.prefix.size()) out << fmt(row.prefix[k]);
    }
    out << '\n';
  }
}

std::string_view to_string(FitModel model) {
  return model == FitModel::kPrefixGeometric ? "prefix_geometric" : "parity_closed_form";
}

FitModel parse_fit_model(std::string_view name) {
  if (name == "prefix_geometric") return FitModel::kPrefixGeometric;
  if (name == "parity_closed_form") return FitModel::kParityClosedForm;
  throw ConfigError("unknown fit model '" + std::string(name) + "' (prefix_geometric, parity_closed_form)");
}

double parity_closed_form(double epsilon, double n) { return 0.5 * (1.0 + std::pow(1.0 - 2.0 * epsilon, n)); }

double prefix_closed_form(double epsilon, double k) { return std::pow(1.0 - epsilon, k); }

StepErrorFit fit_step_error(const AccuracyTable& table, FitModel model) {
  struct Point {
    double x;
    double acc;
  };
  std::vector<Point> points;
  std::size_t usable_rows = 0;
  for (const auto& row : table.rows) {
    if (row.n < 30) continue;
    ++usable_rows;
    if (model == FitModel::kPrefixGeometric) {
      for (std::size_t k = 0; k < row.prefix.size(); ++k) points.push_back({static_cast<double>(k + 1), row.prefix[k]});
    } else {
      points.push_back({row.mean_steps, row.final_acc});
    }
  }
  if (usable_rows < 3)
    throw ConfigError("step-error fit needs at least 3 rows with n >= 30, got " + std::to_string(usable_rows));
  if (points.empty()) throw ConfigError("table has no per-step data to fit");

  StepErrorFit fit;
  fit.model = model;
  if (std::all_of(points.begin(), points.end(), [](const Point& p) { return p.acc >= 1.0; })) return fit;

  const auto predict = [model](double eps, double x) {
    return model == FitModel::kPrefixGeometric ? prefix_closed_form(eps, x) : parity_closed_form(eps, x);
  };
  const auto sse = [&](double eps) {
    double s = 0.0;
    for (const auto& p : points) {
      const double d = predict(eps, p.x) - p.acc;
      s += d * d;
    }
    return s;
  };

  constexpr int kGrid = 2000;
  constexpr double kMax = 0.5;
  int best = 0;
  double best_sse = sse(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = sse(kMax * i / kGrid);
    if (v < best_sse) best_sse = v, best = i;
  }
  // Golden-section refinement inside the neighbouring grid cells.
  double lo = kMax * std::max(0, best - 1) / kGrid;
  double hi = kMax * std::min(kGrid, best + 1) / kGrid;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = sse(a), fb = sse(b);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (fa < fb) {
      hi = b, b = a, fb = fa;
      a = hi - phi * (hi - lo);
      fa = sse(a);
    } else {
      lo = a, a = b, fa = fb;
      b = lo + phi * (hi - lo);
      fb = sse(b);
    }
  }
  double eps = 0.5 * (lo + hi);
  if (sse(eps) > best_sse) eps = kMax * best / kGrid;
  fit.epsilon_hat = std::clamp(eps, 0.0, kMax);
  fit.residual = std::sqrt(sse(fit.epsilon_hat) / static_cast<double>(points.size()));
  return fit;
}

void write_chart_svg(std::span<const std::pair<std::string, AccuracyTable>> series, std::ostream& out) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 150, kTop = 20, kBottom = 50;
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::int64_t xmin = 0, xmax = 1;
  bool first = true;
  std::string metric = series.empty() ? "value" : series.front().second.metric;
  for (const auto& [label, table] : series) {
    for (const auto& row : table.rows) {
      if (first) xmin = xmax = row.value, first = false;
      xmin = std::min(xmin, row.value);
      xmax = std::max(xmax, row.value);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + pw * (x - static_cast<double>(xmin)) / static_cast<double>(xmax - xmin); };
  const auto py = [&](double y) { return kTop + ph * (1.0 - y); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\"" << py(1)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = t / 4.0;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
        << fmt(y).substr(0, 4) << "</text>\n";
  }
  out << "<text x=\"" << kLeft << "\" y=\"" << py(0) + 16 << "\" font-size=\"11\">" << xmin << "</text>\n";
  out << "<text x=\"" << kLeft + pw << "\" y=\"" << py(0) + 16 << "\" font-size=\"11\" text-anchor=\"end\">"
      << xmax << "</text>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
      << metric << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">accuracy</text>\n";
  std::size_t idx = 0;
  for (const auto& [label, table] : series) {
    const char* color = kColors[idx % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      out << (i ? " " : "") << px(static_cast<double>(table.rows[i].value)) << ',' << py(table.rows[i].final_acc);
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(idx + 1);
    out << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << label << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace lengthgen::harness

#include "qdioph/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qdioph/parallel.hpp"
#include "qdioph/rng.hpp"

namespace qdioph {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void ExperimentPlan::validate() const {
  if (T_grid.empty()) throw std::invalid_argument("plan: T_grid is empty");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > 1.0)) throw std::invalid_argument("plan: every T must exceed 1");
    if (i > 0 && !(T_grid[i] > T_grid[i - 1])) throw std::invalid_argument("plan: T_grid must be strictly increasing");
  }
  if (theta_count < 1) throw std::invalid_argument("plan: theta_count must be >= 1");
  if (!(theta_box >= 0) || !std::isfinite(theta_box)) throw std::invalid_argument("plan: theta_box must be nonnegative");
}

Theta sample_theta(int m, int n, double box, std::uint64_t seed, int index) {
  Stream rng(seed, static_cast<std::uint64_t>(index));
  Theta theta(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = rng.uniform(0.0, box);
      const double im = rng.uniform(0.0, box);
      theta(i, j) = {re, im};
    }
  return theta;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<GridSummary> summarize(const std::vector<ConvergenceRow>& rows) {
  std::map<double, std::vector<double>> by_T;
  for (const auto& r : rows) by_T[r.T].push_back(r.ratio);
  std::vector<GridSummary> out;
  for (const auto& [T, ratios] : by_T) {
    GridSummary s;
    s.T = T;
    s.median_ratio = quantile(ratios, 0.5);
    s.q1 = quantile(ratios, 0.25);
    s.q3 = quantile(ratios, 0.75);
    std::vector<double> dev;
    for (double r : ratios) dev.push_back(std::abs(r - 1.0));
    s.median_abs_deviation = quantile(dev, 0.5);
    out.push_back(s);
  }
  return out;
}

ConvergenceTable run_convergence(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  ProblemSpec probe = plan.spec;
  probe.T = plan.T_grid.front();
  probe.validate();

  const std::size_t grid = plan.T_grid.size();
  std::vector<ConvergenceRow> rows(static_cast<std::size_t>(plan.theta_count) * grid);
  parallel_for(static_cast<std::size_t>(plan.theta_count), threads, [&](std::size_t t) {
    const Theta theta = sample_theta(plan.spec.m, plan.spec.n, plan.theta_box, plan.seed, static_cast<int>(t));
    for (std::size_t g = 0; g < grid; ++g) {
      ProblemSpec spec = plan.spec;
      spec.T = plan.T_grid[g];
      const CountReport rep = count_solutions(spec, theta, 1);
      rows[t * grid + g] = {static_cast<int>(t), spec.T, rep.count, rep.predicted, rep.ratio};
    }
  });
  ConvergenceTable table;
  table.rows = std::move(rows);
  table.summary = summarize(table.rows);
  return table;
}

std::vector<ExponentFit> fit_error_exponent(const ConvergenceTable& table) {
  std::map<int, std::vector<const ConvergenceRow*>> by_theta;
  for (const auto& r : table.rows) by_theta[r.theta_index].push_back(&r);
  std::vector<ExponentFit> out;
  for (const auto& [index, rows] : by_theta) {
    ExponentFit fit;
    fit.theta_index = index;
    std::vector<double> xs, ys;
    for (const ConvergenceRow* r : rows) {
      if (!(r->predicted > 10.0)) continue;
      const double residual = std::abs(static_cast<double>(r->count) - r->predicted);
      if (residual == 0.0) {
        fit.degenerate = true;
        continue;
      }
      xs.push_back(std::log(r->predicted));
      ys.push_back(std::log(residual));
    }
    fit.points = static_cast<int>(xs.size());
    if (xs.size() < 3) fit.degenerate = true;
    if (xs.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= static_cast<double>(xs.size());
      my /= static_cast<double>(xs.size());
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      if (sxx > 0) fit.beta = sxy / sxx;
      else fit.degenerate = true;
    }
    out.push_back(fit);
  }
  return out;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "theta_index,T,count,predicted,ratio\n";
  for (const auto& r : table.rows) {
    out << r.theta_index << ',' << fmt("%.17g", r.T) << ',' << r.count << ',' << fmt("%.17g", r.predicted) << ','
        << fmt("%.17g", r.ratio) << '\n';
  }
}

void write_convergence_svg(std::ostream& out, const ConvergenceTable& table) {
  constexpr double kWidth = 800, kHeight = 600;
  constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 70;
  std::vector<double> Ts;
  double lo = 1.0, hi = 1.0;
  for (const auto& r : table.rows) {
    if (std::find(Ts.begin(), Ts.end(), r.T) == Ts.end()) Ts.push_back(r.T);
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  std::sort(Ts.begin(), Ts.end());
  const double pad = std::max(0.05, 0.1 * (hi - lo));
  lo -= pad;
  hi += pad;
  double x_lo = Ts.empty() ? 0.0 : std::log10(Ts.front());
  double x_hi = Ts.empty() ? 1.0 : std::log10(Ts.back());
  if (x_hi - x_lo < 1e-9) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  auto px = [&](double T) { return kLeft + (std::log10(T) - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); };
  auto py = [&](double ratio) { return kTop + (hi - ratio) / (hi - lo) * (kHeight - kTop - kBottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">count / predicted vs log10 T</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
  for (double T : Ts) {
    const std::string x = fmt("%.2f", px(T));
    out << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << x << "\" y2=\""
        << kHeight - kBottom + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 22 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << fmt("%.3g", std::log10(T)) << "</text>\n";
  }
  out << "<text x=\"400\" y=\"" << kHeight - 20 << "\" text-anchor=\"middle\" font-size=\"13\">log10 T</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt("%.2f", py(v) + 4) << "\" text-anchor=\"end\" font-size=\"12\">"
        << fmt("%.3f", v) << "</text>\n";
  }
  out << "<line class=\"reference\" x1=\"" << kLeft << "\" y1=\"" << fmt("%.2f", py(1.0)) << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << fmt("%.2f", py(1.0))
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

  std::map<int, std::vector<const ConvergenceRow*>> by_theta;
  for (const auto& r : table.rows) by_theta[r.theta_index].push_back(&r);
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  for (const auto& [index, rows] : by_theta) {
    out << "<polyline class=\"theta\" data-theta=\"" << index << "\" fill=\"none\" stroke=\""
        << kColors[static_cast<std::size_t>(index) % 10] << "\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ' ';
      out << fmt("%.2f", px(rows[i]->T)) << ',' << fmt("%.2f", py(rows[i]->ratio));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace qdioph

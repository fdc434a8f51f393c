#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qdioph/counting.hpp"

namespace qdioph {

/// Counts for a family of random theta over a grid of cutoffs. spec.T is
/// ignored; each grid value is substituted in turn.
struct ExperimentPlan {
  ProblemSpec spec;
  std::vector<double> T_grid;
  int theta_count = 1;
  double theta_box = 1.0;  // real and imaginary parts uniform in [0, theta_box]
  std::uint64_t seed = 0;

  void validate() const;
};

struct ConvergenceRow {
  int theta_index = 0;
  double T = 0.0;
  std::uint64_t count = 0;
  double predicted = 0.0;
  double ratio = 0.0;
};

struct GridSummary {
  double T = 0.0;
  double median_ratio = 0.0;
  double q1 = 0.0;  // lower quartile of the ratio
  double q3 = 0.0;
  double median_abs_deviation = 0.0;  // median |ratio - 1|
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // theta-major, grid order within theta
  std::vector<GridSummary> summary;  // one per grid value
};

/// theta number `index` of the plan's sample; reproducible from (seed, index).
Theta sample_theta(int m, int n, double box, std::uint64_t seed, int index);

ConvergenceTable run_convergence(const ExperimentPlan& plan, unsigned threads = 1);

/// Recomputes medians and quartiles of `table.rows`.
std::vector<GridSummary> summarize(const std::vector<ConvergenceRow>& rows);

/// Type-7 (linear interpolation) quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

struct ExponentFit {
  int theta_index = 0;
  double beta = 0.0;  // slope of log|count - predicted| against log(predicted)
  int points = 0;
  bool degenerate = false;  // fewer than 3 usable points, or a zero residual
};

/// Per-theta least-squares fit over rows with predicted > 10.
std::vector<ExponentFit> fit_error_exponent(const ConvergenceTable& table);

/// CSV with header theta_index,T,count,predicted,ratio.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
/// 800x600 SVG: ratio against log10 T, one polyline per theta, reference line at 1.
void write_convergence_svg(std::ostream& out, const ConvergenceTable& table);

}  // namespace qdioph

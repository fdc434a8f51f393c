#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qdioph/asymptotics.hpp"

namespace qdioph {
namespace {

ExperimentPlan small_plan() {
  ExperimentPlan p;
  p.spec.field = field_new(1);
  p.spec.m = 1;
  p.spec.n = 2;
  p.spec.psi = PsiSpec::constant(1);
  p.spec.v.assign(3, QuadInt{0, 0});
  p.T_grid = {50, 200, 800};
  p.theta_count = 4;
  p.seed = 99;
  return p;
}

TEST(Quantile, TypeSeven) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.9), 7.0);
}

TEST(Plan, Validation) {
  ExperimentPlan p = small_plan();
  p.T_grid = {};
  EXPECT_THROW(run_convergence(p), std::invalid_argument);
  p.T_grid = {100, 10};
  EXPECT_THROW(run_convergence(p), std::invalid_argument);
  p.T_grid = {1, 10};
  EXPECT_THROW(run_convergence(p), std::invalid_argument);
  p.T_grid = {10};
  p.theta_count = 0;
  EXPECT_THROW(run_convergence(p), std::invalid_argument);
}

TEST(Convergence, SingleRow) {
  ExperimentPlan p = small_plan();
  p.theta_count = 1;
  p.T_grid = {2};
  const ConvergenceTable t = run_convergence(p);
  ASSERT_EQ(t.rows.size(), 1u);
  const ConvergenceRow& r = t.rows[0];
  EXPECT_GT(r.predicted, 0);
  EXPECT_DOUBLE_EQ(r.ratio, static_cast<double>(r.count) / r.predicted);
  ProblemSpec s = p.spec;
  s.T = 2;
  EXPECT_EQ(r.count, count_solutions(s, sample_theta(1, 2, 1.0, 99, 0)).count);
}

TEST(Convergence, ThetaZeroStillTabulated) {
  ExperimentPlan p = small_plan();
  p.theta_box = 0.0;  // every theta is the zero matrix
  const ConvergenceTable t = run_convergence(p);
  EXPECT_EQ(t.rows.size(), 12u);
  for (const auto& r : t.rows) EXPECT_GT(r.predicted, 0);
}

TEST(Convergence, DeterministicAcrossThreads) {
  const ExperimentPlan p = small_plan();
  const ConvergenceTable a = run_convergence(p, 1);
  const ConvergenceTable b = run_convergence(p, 3);
  std::ostringstream sa, sb;
  write_convergence_csv(sa, a);
  write_convergence_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.rows.size(), 12u);
  EXPECT_EQ(a.summary.size(), 3u);
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "theta_index,T,count,predicted,ratio");
}

TEST(Convergence, IdealScalesPredictionExactly) {
  ExperimentPlan p = small_plan();
  const ConvergenceTable a = run_convergence(p);
  const QuadInt g[] = {{1, 1}};
  p.spec.ideal = ideal_from_generators(p.spec.field, g);
  const ConvergenceTable b = run_convergence(p);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_NEAR(b.rows[i].predicted, a.rows[i].predicted / 8, 1e-12 * a.rows[i].predicted);
  }
}

TEST(Summary, MediansAndQuartiles) {
  std::vector<ConvergenceRow> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({i, 10.0, 0, 1.0, 0.8 + 0.1 * i});
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].median_ratio, 1.0);
  EXPECT_NEAR(s[0].q1, 0.9, 1e-15);
  EXPECT_NEAR(s[0].q3, 1.1, 1e-15);
  EXPECT_NEAR(s[0].median_abs_deviation, 0.1, 1e-15);
}

TEST(ExponentFit, SyntheticSquareRootError) {
  // predicted = r^2 keeps predicted + sqrt(predicted) integral.
  ConvergenceTable t;
  for (double r : {10.0, 30.0, 100.0, 300.0}) {
    const double pred = r * r;
    t.rows.push_back({0, pred, static_cast<std::uint64_t>(pred + r), pred, (pred + r) / pred});
  }
  const auto fits = fit_error_exponent(t);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_FALSE(fits[0].degenerate);
  EXPECT_NEAR(fits[0].beta, 0.5, 1e-12);
  EXPECT_EQ(fits[0].points, 4);
}

TEST(ExponentFit, ExactCountsAreDegenerate) {
  ConvergenceTable t;
  for (double pred : {100.0, 1000.0, 10000.0}) t.rows.push_back({0, pred, static_cast<std::uint64_t>(pred), pred, 1.0});
  const auto fits = fit_error_exponent(t);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_TRUE(fits[0].degenerate);
}

TEST(Svg, PolylinePerThetaAndReference) {
  const ConvergenceTable t = run_convergence(small_plan());
  std::ostringstream s;
  write_convergence_svg(s, t);
  const std::string svg = s.str();
  EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"reference\""), std::string::npos);
  std::size_t lines = 0;
  for (std::size_t pos = svg.find("<polyline class=\"theta\""); pos != std::string::npos;
       pos = svg.find("<polyline class=\"theta\"", pos + 1))
    ++lines;
  EXPECT_EQ(lines, 4u);
}

}  // namespace
}  // namespace qdioph

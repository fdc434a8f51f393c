#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qdioph/psi.hpp"
#include "qdioph/regions.hpp"
#include "qdioph/rng.hpp"

namespace qdioph {
namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson in log t; independent of the closed forms.
double integral_oracle(const PsiSpec& psi, double a, double b) {
  if (b <= a) return 0.0;
  const int n = 200000;
  const double la = std::log(a), lb = std::log(b), h = (lb - la) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = la + i * h;
    const double t = std::exp(u);
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * psi(t) * t;
  }
  return s * h / 3;
}

TEST(Psi, Examples) {
  EXPECT_DOUBLE_EQ(psi_eval(PsiSpec::power(1, 1), 10), 0.1);
  EXPECT_DOUBLE_EQ(psi_eval(PsiSpec::constant(1), 7), 1.0);
  for (const PsiSpec& p : {PsiSpec::constant(2), PsiSpec::power(1, 0.5), PsiSpec::step({1, 3}, {2, 1})}) {
    EXPECT_EQ(psi_eval(p, 0.5), 0.0);
  }
}

TEST(Psi, IntegralExamples) {
  EXPECT_DOUBLE_EQ(psi_integral(PsiSpec::constant(1), 10), 9.0);
  EXPECT_NEAR(psi_integral(PsiSpec::power(1, 1), std::exp(2.0)), 2.0, 1e-14);
  EXPECT_NEAR(psi_integral(PsiSpec::power(1, 0.5), 4), 2.0, 1e-14);
  EXPECT_THROW(psi_integral(PsiSpec::constant(1), 0.5), std::invalid_argument);
}

TEST(Psi, IntegralMatchesQuadrature) {
  const PsiSpec step = PsiSpec::step({1, 2, 5, 10}, {3, 2, 1, 0.5});
  for (const PsiSpec& p : {PsiSpec::constant(0.7), PsiSpec::power(2, 0.3), PsiSpec::power(1, 1), step}) {
    for (double T : {1.5, 7.0, 42.0}) {
      const double oracle = integral_oracle(p, 1, T);
      // Step functions break Simpson's smoothness; compare with a looser band there.
      const double tol = p.family() == PsiFamily::kStep ? 2e-3 : 1e-9;
      EXPECT_NEAR(psi_integral(p, T), oracle, tol * std::max(1.0, oracle)) << p.describe() << " T=" << T;
    }
  }
  EXPECT_DOUBLE_EQ(psi_integral(step, 12), 3 * 1 + 2 * 3 + 1 * 5 + 0.5 * 2);
}

TEST(Psi, MonotoneNonincreasing) {
  const PsiSpec step = PsiSpec::step({1, 2, 5}, {3, 3, 1});
  for (const PsiSpec& p : {PsiSpec::constant(1), PsiSpec::power(1, 0.5), PsiSpec::power(3, 1), step}) {
    double prev = p(1.0);
    for (double t = 1.0; t < 1000; t *= 1.01) {
      EXPECT_LE(p(t), prev);
      EXPECT_GT(p(t), 0.0);
      prev = p(t);
    }
  }
}

TEST(Psi, RejectsInvalidFamilies) {
  EXPECT_THROW(PsiSpec::constant(0), std::invalid_argument);
  EXPECT_THROW(PsiSpec::power(1, 1.5), std::invalid_argument);
  EXPECT_THROW(PsiSpec::power(1, 0), std::invalid_argument);
  EXPECT_THROW(PsiSpec::step({1, 2}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(PsiSpec::step({2, 3}, {2, 1}), std::invalid_argument);
  EXPECT_THROW(PsiSpec::step({1, 2}, {1, 0}), std::invalid_argument);
}

RegionSpec region(RegionKind kind, const PsiSpec& psi, double T, double eps = 0.1, int m = 1, int n = 2) {
  RegionSpec r;
  r.kind = kind;
  r.m = m;
  r.n = n;
  r.psi = psi;
  r.T = T;
  r.eps = eps;
  return r;
}

bool member(const RegionSpec& r, std::vector<std::complex<double>> p) { return membership(r, p); }

TEST(Membership, Examples) {
  const RegionSpec et = region(RegionKind::kET, PsiSpec::constant(1), 16);
  EXPECT_TRUE(member(et, {1.0, 1.0, 0.0}));
  EXPECT_FALSE(member(et, {0.0, 0.0, 0.0}));
  EXPECT_THROW(member(et, {1.0, 1.0}), std::invalid_argument);

  // ||y||^n = 1.2 and ||x||^m = psi(1.2): in E_T, and in E+ through C0.
  const PsiSpec psi = PsiSpec::power(1, 0.5);
  const double s = 1.2;
  const double y = std::sqrt(std::sqrt(s));  // |y|^2 squared = s for n = 2
  // Shrink x by a relative 1e-12 so rounding in the square roots cannot push it out.
  const std::vector<std::complex<double>> pt{std::sqrt(psi(s) * (1 - 1e-12)), y, 0.0};
  EXPECT_TRUE(member(region(RegionKind::kET, psi, 16), pt));
  EXPECT_TRUE(member(region(RegionKind::kEPlus, psi, 16), pt));
  EXPECT_TRUE(member(region(RegionKind::kC0, psi, 16), pt));
  EXPECT_FALSE(member(region(RegionKind::kEMinus, psi, 16), pt));
}

TEST(Membership, ShellIsHalfOpen) {
  const RegionSpec et = region(RegionKind::kET, PsiSpec::constant(1), 16, 0.1, 1, 1);
  EXPECT_TRUE(member(et, {0.0, 1.0}));
  EXPECT_FALSE(member(et, {0.0, 4.0}));  // |y|^2 = 16 = T
  EXPECT_TRUE(member(et, {1.0, std::nextafter(4.0, 0.0)}));
}

TEST(Volume, Fixtures) {
  EXPECT_NEAR(volume_archimedean(region(RegionKind::kET, PsiSpec::constant(1), 10)), 9 * std::pow(kPi, 3), 1e-9);
  EXPECT_NEAR(volume_archimedean(region(RegionKind::kET, PsiSpec::constant(1), 10)), 279.06, 5e-3);
  EXPECT_EQ(volume_archimedean(region(RegionKind::kET, PsiSpec::power(1, 1), 1)), 0.0);

  const RegionSpec r = region(RegionKind::kET, PsiSpec::constant(1), 10);
  const FieldSpec f = field_new(1);
  EXPECT_NEAR(adelic_volume(r, f, unit_ideal()), 9 * std::pow(kPi, 3), 1e-9);
  const QuadInt g[] = {{1, 1}};
  EXPECT_NEAR(adelic_volume(r, f, ideal_from_generators(f, g)), 9 * std::pow(kPi, 3) / 8, 1e-9);
  EXPECT_NEAR(adelic_volume(r, f, ideal_from_generators(f, g)), 34.88, 5e-3);
  EXPECT_NEAR(alpha_infinity(r), 8 * volume_archimedean(r), 1e-9);
}

TEST(Volume, LinearInPsiIntegral) {
  const FieldSpec f = field_new(2);
  const RegionSpec a = region(RegionKind::kET, PsiSpec::constant(1), 11);
  const RegionSpec b = region(RegionKind::kET, PsiSpec::constant(1), 21);  // Psi doubles
  EXPECT_NEAR(adelic_volume(b, f, unit_ideal()), 2 * adelic_volume(a, f, unit_ideal()), 1e-9);
}

TEST(Volume, ClosedFormsMatchShellQuadrature) {
  // vol = pi^d * integral over s of the x-measure of the region's section.
  const double eps = 0.2;
  for (const PsiSpec& p : {PsiSpec::constant(1), PsiSpec::power(1, 1), PsiSpec::power(1, 0.5)}) {
    const double T = 50;
    const double pd = std::pow(kPi, 3);
    EXPECT_NEAR(volume_archimedean(region(RegionKind::kET, p, T)), pd * integral_oracle(p, 1, T), 1e-6);
    // E-: section measure (1+eps)^{-1} psi((1+eps) s) on [3/2, T/(1+eps)).
    double em = 0, ep = 0;
    const int n = 400000;
    {
      const double a = 1.5, b = T / (1 + eps), h = (b - a) / n;
      for (int i = 0; i < n; ++i) {
        const double s = a + (i + 0.5) * h;
        em += p((1 + eps) * s) / (1 + eps) * h;
      }
    }
    {
      const double a = 1.5, b = (1 + eps) * T, h = (b - a) / n;
      for (int i = 0; i < n; ++i) {
        const double s = a + (i + 0.5) * h;
        ep += (1 + eps) * p(s / (1 + eps)) * h;
      }
    }
    ep += 2 * p(1.0);  // C0 over the unit-length shell [1/2, 3/2]
    EXPECT_NEAR(volume_archimedean(region(RegionKind::kEMinus, p, T, eps)), pd * em, 1e-5 * pd * em);
    EXPECT_NEAR(volume_archimedean(region(RegionKind::kEPlus, p, T, eps)), pd * ep, 1e-5 * pd * ep);
    EXPECT_NEAR(volume_archimedean(region(RegionKind::kC0, p, T, eps)), pd * 2 * p(1.0), 1e-9);
  }
}

TEST(Volume, NondecreasingInT) {
  for (RegionKind kind : {RegionKind::kET, RegionKind::kEMinus, RegionKind::kEPlus}) {
    double prev = -1;
    for (double T = 1.0; T < 1000; T *= 1.3) {
      const double v = volume_archimedean(region(kind, PsiSpec::power(1, 0.5), T, 0.1));
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(MonteCarlo, AgreesWithClosedFormAllKinds) {
  std::uint64_t seed = 100;
  for (RegionKind kind : {RegionKind::kET, RegionKind::kEMinus, RegionKind::kEPlus, RegionKind::kC0}) {
    for (const PsiSpec& p : {PsiSpec::constant(1), PsiSpec::power(1, 1), PsiSpec::power(1, 0.5)}) {
      const RegionSpec r = region(kind, p, 40, 0.1);
      const MonteCarloVolume mc = monte_carlo_volume(r, 200000, ++seed, 2);
      const double exact = volume_archimedean(r);
      EXPECT_LE(std::abs(mc.volume - exact), 3 * mc.std_error + 1e-9 * exact)
          << to_string(kind) << " " << p.describe() << " mc=" << mc.volume << " se=" << mc.std_error;
    }
  }
}

TEST(MonteCarlo, DeterministicAndThreadIndependent) {
  const RegionSpec r = region(RegionKind::kEMinus, PsiSpec::power(1, 1), 30, 0.2);
  const MonteCarloVolume a = monte_carlo_volume(r, 50000, 9, 1);
  const MonteCarloVolume b = monte_carlo_volume(r, 50000, 9, 3);
  EXPECT_EQ(a.volume, b.volume);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.volume, monte_carlo_volume(r, 50000, 10, 1).volume);
}

TEST(Sandwich, ContainmentOnSampledPoints) {
  const PsiSpec psi = PsiSpec::power(1, 0.5);
  const RegionSpec et = region(RegionKind::kET, psi, 100, 0.1);
  const RegionSpec minus = region(RegionKind::kEMinus, psi, 100, 0.1);
  const RegionSpec plus = region(RegionKind::kEPlus, psi, 100, 0.1);
  Stream rng(4, 0);
  const RegionSampler sm(minus), se(et);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::VectorXcd a = sm.sample(rng);
    ASSERT_TRUE(membership(minus, {a.data(), 3}));
    EXPECT_TRUE(membership(et, {a.data(), 3}));
    const Eigen::VectorXcd b = se.sample(rng);
    ASSERT_TRUE(membership(et, {b.data(), 3}));
    EXPECT_TRUE(membership(plus, {b.data(), 3}));
  }
}

TEST(Sandwich, IdentityHasNoViolations) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  const SandwichReport r = sandwich_check(1, 2, PsiSpec::constant(1), 100, 0.1, id, 20000, 1);
  EXPECT_EQ(r.violations_minus, 0u);
  EXPECT_EQ(r.violations_plus, 0u);
  const SandwichReport empty = sandwich_check(1, 2, PsiSpec::constant(1), 100, 0.1, id, 0, 1);
  EXPECT_EQ(empty.samples, 0u);
  EXPECT_EQ(empty.violations_minus + empty.violations_plus, 0u);
}

TEST(Sandwich, CompensatedScalingIsCaught) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = h(2, 2) = 1.0 / std::sqrt(2.0);
  ASSERT_TRUE(in_subgroup_h(h, 1, 2));
  const SandwichReport r = sandwich_check(1, 2, PsiSpec::constant(1), 100, 0.05, h, 20000, 2);
  EXPECT_GT(r.violations_minus + r.violations_plus, 0u);
}

TEST(Sandwich, RejectsOutsideH) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(3, 3);
  h(0, 1) = 0.5;  // upper-right block must vanish
  EXPECT_FALSE(in_subgroup_h(h, 1, 2));
  EXPECT_THROW(sandwich_check(1, 2, PsiSpec::constant(1), 100, 0.1, h, 10, 1), std::invalid_argument);
  Eigen::MatrixXcd s = 2.0 * Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_THROW(sandwich_check(1, 2, PsiSpec::constant(1), 100, 0.1, s, 10, 1), std::invalid_argument);
  EXPECT_THROW(sandwich_check(1, 2, PsiSpec::constant(1), 5, 0.1, Eigen::MatrixXcd::Identity(3, 3), 10, 1),
               std::invalid_argument);
}

TEST(Sandwich, NearIdentitySamplesStayInH) {
  Stream rng(12, 0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXcd h = random_h_near_identity(1, 2, 1e-3, rng);
    EXPECT_TRUE(in_subgroup_h(h, 1, 2));
    EXPECT_LE((h - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-3);
  }
}

TEST(Sandwich, VolumeRatioApproachesScaling) {
  const double eps = 0.1;
  for (const PsiSpec& p : {PsiSpec::constant(1), PsiSpec::power(1, 0.5), PsiSpec::power(1, 1)}) {
    double c = 0.0;
    std::vector<double> grid{1e2, 1e3, 1e4, 1e5};
    for (double T : grid) {
      const double base = volume_archimedean(region(RegionKind::kET, p, T, eps));
      for (auto [kind, power] : {std::pair{RegionKind::kEMinus, -2}, std::pair{RegionKind::kEPlus, 2}}) {
        const double ratio = volume_archimedean(region(kind, p, T, eps)) / base;
        const double dev = std::abs(ratio - std::pow(1 + eps, power)) * psi_integral(p, T);
        if (T == grid.front()) {
          c = std::max(c, dev);
        } else {
          EXPECT_LE(dev, c * (1 + 1e-9)) << p.describe() << " T=" << T;
        }
      }
    }
  }
}

}  // namespace
}  // namespace qdioph

#include "qdioph/regions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qdioph/parallel.hpp"

namespace qdioph {

namespace {

constexpr double kPi = std::numbers::pi;

// Sup-norm of a block raised to the block dimension: (max_i |z_i|^2)^k.
double block_norm_power(std::span<const std::complex<double>> z) {
  double sup = 0.0;
  for (const auto& c : z) sup = std::max(sup, std::norm(c));
  return std::pow(sup, static_cast<double>(z.size()));
}

// One monotone piece of a region: shell lo <= s <= hi and the x-bound
// scale * psi(arg_scale * s) (or scale * psi(1) when frozen). Used only to
// build Monte Carlo strata; membership() is the ground truth.
struct Piece {
  double lo;
  double hi;
  double scale;
  double arg_scale;
  bool frozen;

  double bound(const PsiSpec& psi, double s) const { return scale * psi(frozen ? 1.0 : arg_scale * s); }
};

std::vector<Piece> pieces(const RegionSpec& r) {
  const double e = r.eps;
  switch (r.kind) {
    case RegionKind::kET:
      return {{1.0, r.T, 1.0, 1.0, false}};
    case RegionKind::kEMinus:
      return {{1.5, r.T / (1.0 + e), 1.0 / (1.0 + e), 1.0 + e, false}};
    case RegionKind::kEPlus:
      return {{0.5, 1.5, 2.0, 1.0, true}, {1.5, (1.0 + e) * r.T, 1.0 + e, 1.0 / (1.0 + e), false}};
    case RegionKind::kC0:
      return {{0.5, 1.5, 2.0, 1.0, true}};
  }
  return {};
}

struct Stratum {
  double s_lo;
  double s_hi;
  double x_bound;  // sup of ||x||^m over the stratum
  double box_volume;
};

std::vector<Stratum> strata(const RegionSpec& r) {
  constexpr int kPerPiece = 24;
  std::vector<Stratum> out;
  for (const Piece& p : pieces(r)) {
    if (!(p.hi > p.lo)) continue;
    const double ratio = std::pow(p.hi / p.lo, 1.0 / kPerPiece);
    double a = p.lo;
    for (int k = 0; k < kPerPiece; ++k) {
      const double b = k + 1 == kPerPiece ? p.hi : a * ratio;
      const double x_bound = p.bound(r.psi, a);
      const double vol = std::pow(kPi, r.n) * (b - a) * std::pow(kPi, r.m) * x_bound;
      if (vol > 0) out.push_back({a, b, x_bound, vol});
      a = b;
    }
  }
  return out;
}

// Uniform point of the stratum box: ||y||^n uniform in [s_lo, s_hi) (the
// y-measure of {||y||^n < s} is pi^n s), y uniform on that sup-sphere, x
// uniform in the polydisc ||x||^m <= x_bound.
void sample_box(const RegionSpec& r, const Stratum& st, Stream& rng, Eigen::VectorXcd& point) {
  const double s = rng.uniform(st.s_lo, st.s_hi);
  const double rho = std::pow(s, 1.0 / (2.0 * r.n));
  const auto boundary = static_cast<int>(rng.below(static_cast<std::uint64_t>(r.n)));
  for (int j = 0; j < r.n; ++j) {
    const double radius = j == boundary ? rho : rho * std::sqrt(rng.uniform01());
    point(r.m + j) = std::polar(radius, 2.0 * kPi * rng.uniform01());
  }
  const double x_radius = std::pow(st.x_bound, 1.0 / (2.0 * r.m));
  for (int i = 0; i < r.m; ++i) {
    point(i) = std::polar(x_radius * std::sqrt(rng.uniform01()), 2.0 * kPi * rng.uniform01());
  }
}

bool member(const RegionSpec& r, const Eigen::VectorXcd& p) {
  return membership(r, std::span<const std::complex<double>>(p.data(), static_cast<std::size_t>(p.size())));
}

}  // namespace

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::kET:
      return "E_T";
    case RegionKind::kEMinus:
      return "E_T_eps_minus";
    case RegionKind::kEPlus:
      return "E_T_eps_plus";
    case RegionKind::kC0:
      return "C0";
  }
  return "?";
}

RegionKind parse_region_kind(const std::string& name) {
  if (name == "E_T") return RegionKind::kET;
  if (name == "E_T_eps_minus") return RegionKind::kEMinus;
  if (name == "E_T_eps_plus") return RegionKind::kEPlus;
  if (name == "C0") return RegionKind::kC0;
  throw std::invalid_argument("unknown region kind '" + name + "'");
}

void RegionSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("region: m and n must be positive");
  if (!(T >= 1.0) || !std::isfinite(T)) throw std::invalid_argument("region: T must be >= 1");
  if (kind != RegionKind::kET && kind != RegionKind::kC0 && !(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("region: eps must lie in (0, 1/2)");
}

bool membership(const RegionSpec& r, std::span<const std::complex<double>> point) {
  if (point.size() != static_cast<std::size_t>(r.d()))
    throw std::invalid_argument("membership: point has wrong dimension");
  const double X = block_norm_power(point.subspan(0, static_cast<std::size_t>(r.m)));
  const double Y = block_norm_power(point.subspan(static_cast<std::size_t>(r.m)));
  const double e = r.eps;
  const auto in_c0 = [&] { return X <= 2.0 * r.psi(1.0) && Y >= 0.5 && Y <= 1.5; };
  switch (r.kind) {
    case RegionKind::kET:
      return X <= r.psi(Y) && Y >= 1.0 && Y < r.T;
    case RegionKind::kEMinus:
      return X <= r.psi((1.0 + e) * Y) / (1.0 + e) && Y >= 1.5 && Y < r.T / (1.0 + e);
    case RegionKind::kEPlus:
      return (X <= (1.0 + e) * r.psi(Y / (1.0 + e)) && Y >= 1.5 && Y <= (1.0 + e) * r.T) || in_c0();
    case RegionKind::kC0:
      return in_c0();
  }
  return false;
}

double volume_archimedean(const RegionSpec& r) {
  r.validate();
  const double pi_d = std::pow(kPi, r.d());
  const double e = r.eps;
  const double c0 = pi_d * 2.0 * r.psi(1.0);
  switch (r.kind) {
    case RegionKind::kET:
      return pi_d * psi_integral(r.psi, r.T);
    case RegionKind::kEMinus:
      if (!(r.T / (1.0 + e) > 1.5)) return 0.0;
      return pi_d * r.psi.integral(1.5 * (1.0 + e), r.T) / ((1.0 + e) * (1.0 + e));
    case RegionKind::kEPlus:
      return pi_d * (1.0 + e) * (1.0 + e) * r.psi.integral(1.5 / (1.0 + e), r.T) + c0;
    case RegionKind::kC0:
      return c0;
  }
  return 0.0;
}

double alpha_infinity(const RegionSpec& r) { return std::ldexp(volume_archimedean(r), r.d()); }

double adelic_factor(const FieldSpec& f, const IdealRep& ideal, int d) {
  const double disc = std::abs(static_cast<double>(f.discriminant()));
  return std::ldexp(1.0, d) * std::pow(disc, -0.5 * d) * std::pow(static_cast<double>(ideal.norm), -d);
}

double adelic_volume(const RegionSpec& r, const FieldSpec& f, const IdealRep& ideal) {
  return adelic_factor(f, ideal, r.d()) * volume_archimedean(r);
}

MonteCarloVolume monte_carlo_volume(const RegionSpec& r, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads) {
  r.validate();
  MonteCarloVolume out;
  if (samples == 0) return out;
  const std::vector<Stratum> st = strata(r);
  if (st.empty()) return out;
  double total_box = 0.0;
  for (const auto& s : st) total_box += s.box_volume;

  std::vector<std::uint64_t> budget(st.size());
  std::vector<std::uint64_t> hits(st.size(), 0);
  for (std::size_t k = 0; k < st.size(); ++k) {
    const double share = static_cast<double>(samples) * st[k].box_volume / total_box;
    budget[k] = std::max<std::uint64_t>(16, static_cast<std::uint64_t>(std::llround(share)));
  }
  parallel_for(st.size(), threads, [&](std::size_t k) {
    Stream rng(seed, k);
    Eigen::VectorXcd p(r.d());
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < budget[k]; ++i) {
      sample_box(r, st[k], rng, p);
      if (member(r, p)) ++h;
    }
    hits[k] = h;
  });
  double variance = 0.0;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const double n_k = static_cast<double>(budget[k]);
    const double frac = static_cast<double>(hits[k]) / n_k;
    out.volume += st[k].box_volume * frac;
    variance += st[k].box_volume * st[k].box_volume * frac * (1.0 - frac) / n_k;
    out.samples += budget[k];
  }
  out.std_error = std::sqrt(variance);
  return out;
}

struct RegionSampler::Impl {
  RegionSpec region;
  std::vector<Stratum> strata;
  std::vector<double> cumulative;
};

RegionSampler::RegionSampler(const RegionSpec& region) {
  region.validate();
  auto impl = std::make_shared<Impl>();
  impl->region = region;
  impl->strata = strata(region);
  if (impl->strata.empty()) throw std::invalid_argument("region sampler: region is empty");
  double total = 0.0;
  for (const auto& s : impl->strata) impl->cumulative.push_back(total += s.box_volume);
  impl_ = std::move(impl);
}

Eigen::VectorXcd RegionSampler::sample(Stream& rng) const {
  const auto& st = impl_->strata;
  const auto& cum = impl_->cumulative;
  Eigen::VectorXcd p(impl_->region.d());
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double u = rng.uniform01() * cum.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    sample_box(impl_->region, st[std::min(k, st.size() - 1)], rng, p);
    if (member(impl_->region, p)) return p;
  }
  throw std::runtime_error("region sampler: rejection failed to hit the region");
}

bool in_subgroup_h(const Eigen::MatrixXcd& h, int m, int n, double tol) {
  const int d = m + n;
  if (h.rows() != d || h.cols() != d) return false;
  if (!h.allFinite()) return false;
  for (int i = 0; i < m; ++i)
    for (int j = m; j < d; ++j)
      if (std::abs(h(i, j)) > tol) return false;
  const std::complex<double> det = h.topLeftCorner(m, m).determinant() * h.bottomRightCorner(n, n).determinant();
  return std::abs(std::norm(det) - 1.0) <= tol;
}

Eigen::MatrixXcd random_h_near_identity(int m, int n, double distance, Stream& rng) {
  const int d = m + n;
  for (;;) {
    Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (i < m && j >= m) continue;
        delta(i, j) = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      }
    delta *= 0.5 * distance / delta.norm();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(d, d) + delta;
    const double det_abs = std::abs(h.topLeftCorner(m, m).determinant() * h.bottomRightCorner(n, n).determinant());
    h.topLeftCorner(m, m) *= std::pow(det_abs, -1.0 / m);
    if ((h - Eigen::MatrixXcd::Identity(d, d)).norm() <= distance) return h;
  }
}

SandwichReport sandwich_check(int m, int n, const PsiSpec& psi, double T, double eps,
                              const Eigen::MatrixXcd& h, std::uint64_t sample_count, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("sandwich: m and n must be positive");
  if (!(T > 10.0)) throw std::invalid_argument("sandwich: T must exceed 10");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("sandwich: eps must lie in (0, 1/2)");
  if (!in_subgroup_h(h, m, n)) throw std::invalid_argument("sandwich: h is not in the subgroup H");

  SandwichReport report;
  report.samples = sample_count;
  if (sample_count == 0) return report;

  const RegionSpec base{RegionKind::kET, m, n, psi, T, eps};
  const RegionSpec minus{RegionKind::kEMinus, m, n, psi, T, eps};
  const RegionSpec plus{RegionKind::kEPlus, m, n, psi, T, eps};
  const Eigen::MatrixXcd h_inv = h.inverse();

  const RegionSampler minus_sampler(minus);
  const RegionSampler base_sampler(base);
  Stream rng_minus(seed, 0);
  Stream rng_plus(seed, 1);
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    const Eigen::VectorXcd p = minus_sampler.sample(rng_minus);
    if (!member(base, h_inv * p)) ++report.violations_minus;
    const Eigen::VectorXcd q = base_sampler.sample(rng_plus);
    if (!member(plus, h * q)) ++report.violations_plus;
  }
  return report;
}

}  // namespace qdioph

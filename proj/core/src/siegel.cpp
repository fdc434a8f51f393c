#include "qdioph/siegel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qdioph/parallel.hpp"

namespace qdioph {

namespace {

constexpr std::uint64_t kShardSize = 1024;

}  // namespace

PlanarLattice sample_modular_lattice(Stream& rng) {
  const double y_min = std::sqrt(3.0) / 2.0;
  for (;;) {
    const double x = rng.uniform(-0.5, 0.5);
    // Inverse CDF of the y^{-2} marginal on [y_min, inf).
    const double y = y_min / rng.uniform01_open_low();
    if (x * x + y * y < 1.0) continue;
    const double s = 1.0 / std::sqrt(y);
    PlanarLattice l;
    l.x = x;
    l.y = y;
    l.basis = {{{s, 0.0}, {s * x, s * y}}};
    return l;
  }
}

std::uint64_t lattice_disc_count(const PlanarLattice& lattice, double radius) {
  if (!(radius >= 0) || !std::isfinite(radius)) throw std::invalid_argument("lattice_disc_count: bad radius");
  // v = y^{-1/2} (a + b x, b y); |v|^2 <= r^2 iff (a + b x)^2 + b^2 y^2 <= y r^2.
  const double x = lattice.x;
  const double y = lattice.y;
  const double r2y = radius * radius * y;
  const auto b_max = static_cast<std::int64_t>(std::floor(radius / std::sqrt(y))) + 1;
  std::uint64_t count = 0;
  for (std::int64_t b = -b_max; b <= b_max; ++b) {
    const double bd = static_cast<double>(b);
    const double rem = r2y - bd * bd * y * y;
    if (rem < 0) continue;
    const double w = std::sqrt(rem);
    const double c = -bd * x;
    for (auto a = static_cast<std::int64_t>(std::floor(c - w)) - 1; a <= static_cast<std::int64_t>(std::ceil(c + w)) + 1; ++a) {
      const double u = static_cast<double>(a) + bd * x;
      if (u * u + bd * bd * y * y <= r2y) ++count;
    }
  }
  return count - 1;  // the zero vector
}

SiegelReport siegel_mc_check(double radius, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (!(radius > 0) || !std::isfinite(radius)) throw std::invalid_argument("siegel_mc_check: radius must be positive");
  if (samples < 1) throw std::invalid_argument("siegel_mc_check: samples must be >= 1");
  const std::uint64_t shards = (samples + kShardSize - 1) / kShardSize;
  std::vector<double> sum(shards, 0.0), sum_sq(shards, 0.0);
  parallel_for(shards, threads, [&](std::size_t s) {
    Stream rng(seed, s);
    const std::uint64_t begin = s * kShardSize;
    const std::uint64_t end = std::min(samples, begin + kShardSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto c = static_cast<double>(lattice_disc_count(sample_modular_lattice(rng), radius));
      sum[s] += c;
      sum_sq[s] += c * c;
    }
  });
  double total = 0.0, total_sq = 0.0;
  for (std::uint64_t s = 0; s < shards; ++s) {
    total += sum[s];
    total_sq += sum_sq[s];
  }
  const auto n = static_cast<double>(samples);
  SiegelReport r;
  r.radius = radius;
  r.samples = samples;
  r.mean_count = total / n;
  const double var = samples > 1 ? std::max(0.0, (total_sq - n * r.mean_count * r.mean_count) / (n - 1)) : 0.0;
  r.std_error = std::sqrt(var / n);
  r.target_area = std::numbers::pi * radius * radius;
  return r;
}

double modular_mean_inverse_height() { return 3.0 * std::log(3.0) / (2.0 * std::numbers::pi); }

}  // namespace qdioph

#include "qdioph/counting.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qdioph/checked.hpp"
#include "qdioph/parallel.hpp"
#include "qdioph/regions.hpp"

namespace qdioph {

namespace {

long double ipow(long double x, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

std::int64_t to_index(long double x) {
  if (!(std::fabs(x) < 0x1.0p62L)) throw OverflowError("lattice coordinate out of 64-bit range");
  return static_cast<std::int64_t>(x);
}

// Enumerates translate + I inside {w : Q(w - c) <= bound}, where Q is the norm
// form. Candidate lines and ranges come from floating-point root bounds widened
// by one lattice step; membership is decided by the exact-form predicate.
template <typename Visit>
void scan_disc(const FieldSpec& f, const IdealRep& ideal, const QuadInt& t, long double c0, long double c1,
               long double bound, Visit&& visit) {
  if (!(bound >= 0.0L)) return;
  const long double tr = static_cast<long double>(f.omega_trace());
  const long double nm = static_cast<long double>(f.omega_norm());
  const long double disc = 4.0L * nm - tr * tr;
  const std::int64_t a = ideal.basis[0][0];
  const std::int64_t b = ideal.basis[0][1];
  const std::int64_t c = ideal.basis[1][1];
  const long double A0 = static_cast<long double>(t.a) - c0;
  const long double A1 = static_cast<long double>(t.b) - c1;
  const long double Z = std::sqrt(4.0L * nm * bound / disc);
  const std::int64_t s_lo = to_index(std::floor((-Z - A0) / a)) - 1;
  const std::int64_t s_hi = to_index(std::ceil((Z - A0) / a)) + 1;
  const long double slack = 1e-9L * (4.0L * nm * bound + 1.0L);
  for (std::int64_t s = s_lo; s <= s_hi; ++s) {
    const long double z0 = A0 + static_cast<long double>(s) * a;
    const long double rem = 4.0L * nm * bound - disc * z0 * z0;
    if (rem < -slack) continue;
    const long double root = std::sqrt(rem > 0 ? rem : 0.0L);
    const long double z1_lo = (-tr * z0 - root) / (2.0L * nm);
    const long double z1_hi = (-tr * z0 + root) / (2.0L * nm);
    const long double shift = A1 + static_cast<long double>(s) * b;
    const std::int64_t u_lo = to_index(std::floor((z1_lo - shift) / c)) - 1;
    const std::int64_t u_hi = to_index(std::ceil((z1_hi - shift) / c)) + 1;
    const std::int64_t w0 = checked_add(t.a, checked_mul(s, a));
    for (std::int64_t u = u_lo; u <= u_hi; ++u) {
      const QuadInt w{w0, checked_add(t.b, checked_add(checked_mul(s, b), checked_mul(u, c)))};
      const long double dist =
          f.norm_form<long double>(static_cast<long double>(w.a) - c0, static_cast<long double>(w.b) - c1);
      if (dist <= bound) visit(w, dist);
    }
  }
}

struct QPoint {
  QuadInt w;
  std::int64_t norm;
};

// Largest integer M >= 0 with M^n < T.
std::int64_t max_shell_norm(double T, int n) {
  if (!(T < 9.0e18)) throw OverflowError("T exceeds the 64-bit shell range");
  const auto limit = static_cast<std::int64_t>(std::ceil(T));  // K < T  <=>  K < ceil(T) for integer K
  auto below = [&](std::int64_t M) {
    __int128 p = 1;
    for (int i = 0; i < n; ++i) {
      p *= M;
      if (p >= limit) return false;
    }
    return true;
  };
  auto M = static_cast<std::int64_t>(std::floor(std::pow(T, 1.0 / n))) + 1;
  while (M > 0 && !below(M)) --M;
  while (below(M + 1)) ++M;
  return M;
}

std::vector<QPoint> coordinate_candidates(const FieldSpec& f, const IdealRep& ideal, const QuadInt& translate,
                                          std::int64_t max_norm) {
  std::vector<QPoint> out;
  scan_disc(f, ideal, translate, 0.0L, 0.0L, static_cast<long double>(max_norm),
            [&](const QuadInt& w, long double) { out.push_back({w, norm_inf(f, w)}); });
  return out;
}

struct Prepared {
  std::vector<std::vector<QPoint>> lists;  // per q-coordinate
};

Prepared prepare(const ProblemSpec& spec) {
  spec.validate();
  const std::int64_t M = max_shell_norm(spec.T, spec.n);
  Prepared p;
  for (int j = 0; j < spec.n; ++j) {
    p.lists.push_back(coordinate_candidates(spec.field, spec.ideal, spec.v[static_cast<std::size_t>(spec.m + j)], M));
  }
  return p;
}

void check_theta(const ProblemSpec& spec, const Theta& theta) {
  if (theta.rows() != spec.m || theta.cols() != spec.n) throw std::invalid_argument("theta has the wrong shape");
  for (const auto& z : theta.entries())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::invalid_argument("theta has non-finite entries");
}

ShardCount count_range(const ProblemSpec& spec, const Theta& theta, const Prepared& prep, std::size_t shard,
                       std::size_t shard_count) {
  ShardCount out;
  const int n = spec.n;
  std::vector<QuadInt> q(static_cast<std::size_t>(n));
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  const auto& first = prep.lists[0];
  for (std::size_t i0 = shard; i0 < first.size(); i0 += shard_count) {
    // Odometer over coordinates 1..n-1 with coordinate 0 pinned to i0.
    for (int j = 1; j < n; ++j) {
      if (prep.lists[static_cast<std::size_t>(j)].empty()) return out;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    idx[0] = i0;
    for (;;) {
      std::int64_t sup = 0;
      for (int j = 0; j < n; ++j) {
        const QPoint& pt = prep.lists[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
        q[static_cast<std::size_t>(j)] = pt.w;
        sup = std::max(sup, pt.norm);
      }
      if (sup >= 1) {
        ++out.q_enumerated;
        const double psi_val = spec.psi(static_cast<double>(checked_pow(sup, n)));
        const long double target = psi_val;
        const long double bound = std::pow(target, 1.0L / spec.m) * (1.0L + 1e-12L);
        const auto centers = disc_centers(spec.field, theta, q);
        std::uint64_t product = 1;
        for (int i = 0; i < spec.m && product != 0; ++i) {
          const auto [c0, c1] = coordinates_of(spec.field, centers[static_cast<std::size_t>(i)]);
          std::uint64_t hits = 0;
          scan_disc(spec.field, spec.ideal, spec.v[static_cast<std::size_t>(i)], c0, c1, bound,
                    [&](const QuadInt&, long double dist) {
                      if (ipow(dist, spec.m) <= target) ++hits;
                    });
          product *= hits;
        }
        out.count += product;
      }
      int j = n - 1;
      while (j >= 1) {
        auto& k = idx[static_cast<std::size_t>(j)];
        if (++k < prep.lists[static_cast<std::size_t>(j)].size()) break;
        k = 0;
        --j;
      }
      if (j < 1) break;
    }
  }
  return out;
}

}  // namespace

void ProblemSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("problem: m and n must be positive");
  if (d() < 3 && !(d() == 2 && allow_d2)) throw std::invalid_argument("problem: d = m + n must be at least 3");
  if (v.size() != static_cast<std::size_t>(d()))
    throw std::invalid_argument("problem: v must have d = " + std::to_string(d()) + " components");
  if (ideal.norm < 1) throw std::invalid_argument("problem: ideal is not set");
  if (!(T > 1.0) || !std::isfinite(T)) throw std::invalid_argument("problem: T must exceed 1");
}

Theta::Theta(int m, int n) : m_(m), n_(n), entries_(static_cast<std::size_t>(m * n)) {
  if (m < 1 || n < 1) throw std::invalid_argument("theta: dimensions must be positive");
}

Theta::Theta(int m, int n, std::vector<std::complex<double>> entries) : m_(m), n_(n), entries_(std::move(entries)) {
  if (m < 1 || n < 1) throw std::invalid_argument("theta: dimensions must be positive");
  if (entries_.size() != static_cast<std::size_t>(m * n)) throw std::invalid_argument("theta: wrong entry count");
}

std::pair<long double, long double> coordinates_of(const FieldSpec& f, std::complex<long double> z) {
  const std::complex<long double> w = f.omega_ld();
  const long double c1 = z.imag() / w.imag();
  return {z.real() - c1 * w.real(), c1};
}

std::vector<std::complex<long double>> disc_centers(const FieldSpec& f, const Theta& theta,
                                                    const std::vector<QuadInt>& q) {
  const std::complex<long double> w = f.omega_ld();
  std::vector<std::complex<long double>> out(static_cast<std::size_t>(theta.rows()));
  for (int i = 0; i < theta.rows(); ++i) {
    std::complex<long double> acc = 0;
    for (int j = 0; j < theta.cols(); ++j) {
      const QuadInt& qj = q[static_cast<std::size_t>(j)];
      const std::complex<long double> e = static_cast<long double>(qj.a) + static_cast<long double>(qj.b) * w;
      const std::complex<double> t = theta(i, j);
      acc += std::complex<long double>(t.real(), t.imag()) * e;
    }
    out[static_cast<std::size_t>(i)] = -acc;
  }
  return out;
}

void for_each_in_disc(const FieldSpec& f, const IdealRep& ideal, const QuadInt& translate, long double c0,
                      long double c1, long double bound,
                      const std::function<void(const QuadInt&, long double)>& visit) {
  scan_disc(f, ideal, translate, c0, c1, bound, visit);
}

std::uint64_t disc_lattice_count(const FieldSpec& f, const IdealRep& ideal, const QuadInt& translate,
                                 std::complex<double> center, double radius) {
  if (!std::isfinite(radius) || radius < 0) throw std::invalid_argument("disc_lattice_count: bad radius");
  const auto [c0, c1] = coordinates_of(f, {center.real(), center.imag()});
  const long double bound = static_cast<long double>(radius) * radius;
  std::uint64_t count = 0;
  scan_disc(f, ideal, translate, c0, c1, bound, [&](const QuadInt&, long double) { ++count; });
  return count;
}

ShardCount count_solutions_shard(const ProblemSpec& spec, const Theta& theta, std::size_t shard,
                                 std::size_t shard_count) {
  if (shard_count == 0 || shard >= shard_count) throw std::invalid_argument("bad shard index");
  check_theta(spec, theta);
  const Prepared prep = prepare(spec);
  return count_range(spec, theta, prep, shard, shard_count);
}

CountReport count_solutions(const ProblemSpec& spec, const Theta& theta, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  check_theta(spec, theta);
  const Prepared prep = prepare(spec);
  const std::size_t shard_count = threads <= 1 ? 1 : static_cast<std::size_t>(threads) * 4;
  std::vector<ShardCount> parts(shard_count);
  parallel_for(shard_count, threads,
               [&](std::size_t s) { parts[s] = count_range(spec, theta, prep, s, shard_count); });

  CountReport r;
  for (const auto& p : parts) {
    r.count += p.count;
    r.q_enumerated += p.q_enumerated;
  }
  r.T = spec.T;
  r.predicted = adelic_factor(spec.field, spec.ideal, spec.d()) * std::pow(std::numbers::pi, spec.d()) *
                psi_integral(spec.psi, spec.T);
  r.ratio = r.predicted > 0 ? static_cast<double>(r.count) / r.predicted : 0.0;
  r.theorem_backed = spec.theorem_backed();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::uint64_t count_brute_force(const ProblemSpec& spec, const Theta& theta) {
  spec.validate();
  check_theta(spec, theta);
  if (spec.T > 1e4) throw std::invalid_argument("count_brute_force: T must be <= 1e4");
  const FieldSpec& f = spec.field;
  const int m = spec.m;
  const int n = spec.n;
  const long double im_omega = f.omega_ld().imag();

  // Coordinate box containing {w : |w| <= radius}.
  auto box = [&](long double cx0, long double cx1, long double radius, std::int64_t& lo0, std::int64_t& hi0,
                 std::int64_t& lo1, std::int64_t& hi1) {
    const long double r1 = (radius + 1.0L) / im_omega;
    lo1 = static_cast<std::int64_t>(std::floor(cx1 - r1));
    hi1 = static_cast<std::int64_t>(std::ceil(cx1 + r1));
    const long double r0 = radius + 1.0L + r1;
    lo0 = static_cast<std::int64_t>(std::floor(cx0 - r0));
    hi0 = static_cast<std::int64_t>(std::ceil(cx0 + r0));
  };

  std::vector<QuadInt> box_q;
  {
    std::int64_t lo0, hi0, lo1, hi1;
    box(0, 0, std::pow(static_cast<long double>(spec.T), 1.0L / (2 * n)), lo0, hi0, lo1, hi1);
    for (std::int64_t x0 = lo0; x0 <= hi0; ++x0)
      for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) box_q.push_back({x0, x1});
  }
  const std::vector<QuadInt> v_p(spec.v.begin(), spec.v.begin() + m);
  const std::vector<QuadInt> v_q(spec.v.begin() + m, spec.v.end());
  const long double p_radius = std::pow(static_cast<long double>(spec.psi(1.0)), 1.0L / (2 * m));

  std::uint64_t count = 0;
  std::vector<QuadInt> q(static_cast<std::size_t>(n));
  std::vector<std::size_t> qi(static_cast<std::size_t>(n), 0);
  for (;;) {
    for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(j)] = box_q[qi[static_cast<std::size_t>(j)]];
    std::int64_t sup = 0;
    for (const auto& x : q) sup = std::max(sup, norm_inf(f, x));
    const long double shell = ipow(static_cast<long double>(sup), n);
    if (shell >= 1.0L && shell < static_cast<long double>(spec.T) && congruent(f, q, v_q, spec.ideal)) {
      const double psi_val = spec.psi(static_cast<double>(shell));
      const auto centers = disc_centers(f, theta, q);
      std::vector<std::vector<QuadInt>> p_boxes(static_cast<std::size_t>(m));
      std::vector<std::pair<long double, long double>> cc(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        cc[static_cast<std::size_t>(i)] = coordinates_of(f, centers[static_cast<std::size_t>(i)]);
        std::int64_t lo0, hi0, lo1, hi1;
        box(cc[static_cast<std::size_t>(i)].first, cc[static_cast<std::size_t>(i)].second, p_radius, lo0, hi0, lo1, hi1);
        for (std::int64_t x0 = lo0; x0 <= hi0; ++x0)
          for (std::int64_t x1 = lo1; x1 <= hi1; ++x1) p_boxes[static_cast<std::size_t>(i)].push_back({x0, x1});
      }
      std::vector<std::size_t> pi(static_cast<std::size_t>(m), 0);
      std::vector<QuadInt> p(static_cast<std::size_t>(m));
      for (;;) {
        long double sup_p = 0;
        for (int i = 0; i < m; ++i) {
          const auto k = static_cast<std::size_t>(i);
          p[k] = p_boxes[k][pi[k]];
          sup_p = std::max(sup_p, f.norm_form<long double>(static_cast<long double>(p[k].a) - cc[k].first,
                                                          static_cast<long double>(p[k].b) - cc[k].second));
        }
        if (ipow(sup_p, m) <= static_cast<long double>(psi_val) && congruent(f, p, v_p, spec.ideal)) ++count;
        int i = m - 1;
        while (i >= 0 && ++pi[static_cast<std::size_t>(i)] == p_boxes[static_cast<std::size_t>(i)].size()) {
          pi[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
    int j = n - 1;
    while (j >= 0 && ++qi[static_cast<std::size_t>(j)] == box_q.size()) {
      qi[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return count;
}

}  // namespace qdioph

#include "qdioph/heights.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qdioph/checked.hpp"

namespace qdioph {

namespace {

// 0 first, then +-num/den in lowest terms by increasing denominator.
std::vector<Rational> coordinate_values(int bound) {
  std::vector<Rational> out{Rational(0)};
  for (int den = 1; den <= bound; ++den)
    for (int num = 1; num <= bound; ++num) {
      if (std::gcd(num, den) != 1) continue;
      out.emplace_back(num, den);
      out.emplace_back(-num, den);
    }
  return out;
}

std::vector<std::vector<int>> combinations(int k, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(m));
  std::iota(c.begin(), c.end(), 0);
  if (m > k) return out;
  for (;;) {
    out.push_back(c);
    int i = m - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == k - m + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) { return checked_mul(a / std::gcd(a, b), b); }

// Solves A Y = B for A of full column rank; nullopt when inconsistent.
std::optional<RationalMatrix> solve_full_column_rank(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t rows = a.size();
  const std::size_t cols_a = rows ? a[0].size() : 0;
  const std::size_t cols_b = rows ? b[0].size() : 0;
  RationalMatrix aug(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    aug[i] = a[i];
    aug[i].insert(aug[i].end(), b[i].begin(), b[i].end());
  }
  std::vector<int> pivots;
  const RationalMatrix r = reduced_row_echelon(aug, &pivots);
  // Full column rank and consistent: pivots are exactly the A columns.
  if (pivots.size() != cols_a) return std::nullopt;
  for (std::size_t i = 0; i < cols_a; ++i)
    if (static_cast<std::size_t>(pivots[i]) != i) return std::nullopt;
  RationalMatrix y(cols_a, std::vector<Rational>(cols_b));
  for (std::size_t i = 0; i < cols_a; ++i)
    for (std::size_t j = 0; j < cols_b; ++j) y[i][j] = r[i][cols_a + j];
  return y;
}

// Smallest a >= 0 with q * a^2 >= rem, minus one: the largest a with q a^2 < rem.
std::int64_t largest_below(long double rem, long double q) {
  if (!(rem > 0)) return -1;
  auto a = static_cast<std::int64_t>(std::sqrt(rem / q));
  while (a >= 0 && q * static_cast<long double>(a) * static_cast<long double>(a) >= rem) --a;
  while (q * static_cast<long double>(a + 1) * static_cast<long double>(a + 1) < rem) ++a;
  return a;
}

// #{w in Z^k : q |w|^2 < rem}, zero vector included.
std::uint64_t ball_count(int k, long double rem, long double q) {
  const std::int64_t a = largest_below(rem, q);
  if (a < 0) return 0;
  if (k == 1) return static_cast<std::uint64_t>(2 * a + 1);
  std::uint64_t total = ball_count(k - 1, rem, q);
  for (std::int64_t v = 1; v <= a; ++v) {
    total += 2 * ball_count(k - 1, rem - q * static_cast<long double>(v) * static_cast<long double>(v), q);
  }
  return total;
}

std::vector<int> mobius_table(int n) {
  std::vector<int> mu(static_cast<std::size_t>(n + 1), 1);
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (int p = 2; p <= n; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (int j = p; j <= n; j += p) {
      if (j > p) composite[static_cast<std::size_t>(j)] = true;
      mu[static_cast<std::size_t>(j)] = -mu[static_cast<std::size_t>(j)];
    }
    const long long sq = static_cast<long long>(p) * p;
    for (long long j = sq; j <= n; j += sq) mu[static_cast<std::size_t>(j)] = 0;
  }
  return mu;
}

void check_line_args(int k, double x) {
  if (k < 1) throw std::invalid_argument("subspaces: k must be >= 1");
  if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument("subspaces: x must be nonnegative");
  if (x > 1000.0) throw std::invalid_argument("subspaces: x must be <= 1000");
}

}  // namespace

std::string EchelonForm::to_string() const {
  std::string s = "[";
  for (int i = 0; i < m; ++i) {
    s += i ? ";" : "";
    for (int j = 0; j < k; ++j) {
      s += j ? " " : "";
      const QuadRational& e = at(i, j);
      if (e.b.is_zero()) {
        s += e.a.to_string();
      } else {
        s += "(" + e.a.to_string() + (e.b.num() < 0 ? "" : "+") + e.b.to_string() + "w)";
      }
    }
  }
  return s + "]";
}

bool is_valid_echelon(const EchelonForm& f) {
  if (f.m < 1 || f.m > f.k || f.pivots.size() != static_cast<std::size_t>(f.m)) return false;
  if (f.entries.size() != static_cast<std::size_t>(f.m * f.k)) return false;
  const QuadRational one{Rational(1), Rational(0)};
  for (int i = 0; i < f.m; ++i) {
    const int p = f.pivots[static_cast<std::size_t>(i)];
    if (p < 0 || p >= f.k) return false;
    if (i > 0 && p <= f.pivots[static_cast<std::size_t>(i - 1)]) return false;
    if (!(f.at(i, p) == one)) return false;
    for (int j = 0; j < p; ++j)
      if (!f.at(i, j).is_zero()) return false;
    for (int r = 0; r < f.m; ++r)
      if (r != i && !f.at(r, p).is_zero()) return false;
  }
  for (int j = 0; j < f.k; ++j) {
    bool nonzero = false;
    for (int i = 0; i < f.m; ++i) nonzero = nonzero || !f.at(i, j).is_zero();
    if (!nonzero) return false;
  }
  return true;
}

std::vector<EchelonForm> echelon_enumerate(int m, int k, int bound, const std::optional<FieldSpec>& field) {
  if (m < 1 || m > k) throw std::invalid_argument("echelon_enumerate: need 1 <= m <= k");
  if (bound < 1) throw std::invalid_argument("echelon_enumerate: bound must be >= 1");
  const std::vector<Rational> coords = coordinate_values(bound);
  std::vector<QuadRational> values;
  for (const Rational& a : coords) {
    if (field) {
      for (const Rational& b : coords) values.push_back({a, b});
    } else {
      values.push_back({a, Rational(0)});
    }
  }

  std::vector<EchelonForm> out;
  for (const std::vector<int>& piv : combinations(k, m)) {
    std::vector<bool> is_pivot(static_cast<std::size_t>(k), false);
    for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = true;
    // A column left of the first pivot is forced to zero.
    if (piv[0] != 0) continue;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < m; ++i)
      for (int j = piv[static_cast<std::size_t>(i)] + 1; j < k; ++j)
        if (!is_pivot[static_cast<std::size_t>(j)]) free_pos.emplace_back(i, j);

    EchelonForm form;
    form.m = m;
    form.k = k;
    form.pivots = piv;
    form.entries.assign(static_cast<std::size_t>(m * k), QuadRational{});
    for (int i = 0; i < m; ++i) form.entries[static_cast<std::size_t>(i * k + piv[static_cast<std::size_t>(i)])] = {Rational(1), Rational(0)};

    std::vector<std::size_t> idx(free_pos.size(), 0);
    for (;;) {
      for (std::size_t t = 0; t < free_pos.size(); ++t) {
        const auto [i, j] = free_pos[t];
        form.entries[static_cast<std::size_t>(i * k + j)] = values[idx[t]];
      }
      bool no_zero_column = true;
      for (int j = 0; j < k && no_zero_column; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        bool nonzero = false;
        for (int i = 0; i < m; ++i) nonzero = nonzero || !form.at(i, j).is_zero();
        no_zero_column = nonzero;
      }
      if (no_zero_column) out.push_back(form);
      std::size_t t = free_pos.size();
      while (t > 0) {
        if (++idx[t - 1] < values.size()) break;
        idx[t - 1] = 0;
        --t;
      }
      if (t == 0) break;
    }
  }
  return out;
}

RationalMatrix reduced_row_echelon(RationalMatrix a, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    const Rational inv = Rational(1) / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Rational factor = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= factor * a[r][j];
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return a;
}

DecompositionReport decomposition_check(int d, int k, int g) {
  if (k < 1 || k >= d) throw std::invalid_argument("decomposition_check: need 1 <= k < d");
  if (g < 1 || g > 3) throw std::invalid_argument("decomposition_check: grid_bound must lie in [1, 3]");
  DecompositionReport report;
  report.by_rank.assign(static_cast<std::size_t>(k + 1), 0);
  const int side = 2 * g + 1;
  const std::size_t cells = static_cast<std::size_t>(d * k);
  std::vector<int> digits(cells, 0);
  std::vector<std::vector<std::vector<int>>> pivot_sets(static_cast<std::size_t>(k + 1));
  for (int m = 1; m <= k; ++m) pivot_sets[static_cast<std::size_t>(m)] = combinations(k, m);

  for (;;) {
    RationalMatrix x(static_cast<std::size_t>(d), std::vector<Rational>(static_cast<std::size_t>(k)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(digits[static_cast<std::size_t>(i * k + j)] - g);
    bool zero_column = false;
    for (int j = 0; j < k && !zero_column; ++j) {
      bool nonzero = false;
      for (int i = 0; i < d; ++i) nonzero = nonzero || !x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero();
      zero_column = !nonzero;
    }
    if (!zero_column) {
      ++report.matrices;
      // Route 1: the row-reduced form of X gives the candidate factorization.
      std::vector<int> piv;
      const RationalMatrix rref = reduced_row_echelon(x, &piv);
      const int rank = static_cast<int>(piv.size());
      EchelonForm expected;
      expected.m = rank;
      expected.k = k;
      expected.pivots = piv;
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < k; ++j) expected.entries.push_back({rref[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], Rational(0)});

      // Route 2: every pivot set P with X[:,P] of full column rank; solve X[:,P] D = X.
      int solutions = 0;
      bool expected_found = false;
      for (int m = 1; m <= k; ++m) {
        for (const auto& p : pivot_sets[static_cast<std::size_t>(m)]) {
          RationalMatrix xp(static_cast<std::size_t>(d));
          for (int i = 0; i < d; ++i)
            for (int c : p) xp[static_cast<std::size_t>(i)].push_back(x[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
          const auto sol = solve_full_column_rank(xp, x);
          if (!sol) continue;
          EchelonForm cand;
          cand.m = m;
          cand.k = k;
          cand.pivots = p;
          for (const auto& row : *sol)
            for (const auto& e : row) cand.entries.push_back({e, Rational(0)});
          if (!is_valid_echelon(cand)) continue;
          ++solutions;
          if (cand == expected) expected_found = true;
        }
      }
      if (!expected_found || !is_valid_echelon(expected)) ++report.existence_failures;
      if (solutions != 1) ++report.uniqueness_failures;
      if (expected_found) ++report.by_rank[static_cast<std::size_t>(rank)];
    }
    std::size_t t = cells;
    while (t > 0) {
      if (++digits[t - 1] < side) break;
      digits[t - 1] = 0;
      --t;
    }
    if (t == 0) break;
  }
  return report;
}

LatticeBasis lattice_saturation(const RationalMatrix& rows) {
  if (rows.empty()) throw std::invalid_argument("lattice_saturation: no rows");
  const std::size_t cols = rows[0].size();
  IntMatrix b(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("lattice_saturation: ragged rows");
    std::int64_t l = 1;
    for (const auto& e : rows[i]) l = lcm_checked(l, e.den());
    for (std::size_t j = 0; j < cols; ++j) {
      b(i, j) = checked_mul(rows[i][j].num(), l / rows[i][j].den());
    }
  }
  return {saturate_rows(b), true};
}

double lattice_determinant(const LatticeBasis& basis) {
  const __int128 g = gram_determinant(basis.basis);
  return static_cast<double>(std::sqrt(static_cast<long double>(g)));
}

double subspace_height(const EchelonForm& form, const std::optional<FieldSpec>& field) {
  RationalMatrix rows;
  if (!field) {
    for (int i = 0; i < form.m; ++i) {
      std::vector<Rational> row;
      for (int j = 0; j < form.k; ++j) {
        if (!form.at(i, j).b.is_zero()) throw std::invalid_argument("subspace_height: entry outside Q");
        row.push_back(form.at(i, j).a);
      }
      rows.push_back(std::move(row));
    }
  } else {
    // [x * omega] = [x] * omega~ for rational coordinates too.
    const Mat2 w = regular_representation(*field, QuadInt{0, 1});
    for (int i = 0; i < form.m; ++i) {
      std::vector<Rational> row, row_w;
      for (int j = 0; j < form.k; ++j) {
        const QuadRational& e = form.at(i, j);
        row.push_back(e.a);
        row.push_back(e.b);
        row_w.push_back(e.a * Rational(w[0][0]) + e.b * Rational(w[1][0]));
        row_w.push_back(e.a * Rational(w[0][1]) + e.b * Rational(w[1][1]));
      }
      rows.push_back(std::move(row));
      rows.push_back(std::move(row_w));
    }
  }
  return lattice_determinant(lattice_saturation(rows));
}

std::uint64_t subspace_count(int k, double x) {
  check_line_args(k, x);
  const long double limit = static_cast<long double>(x) * static_cast<long double>(x);
  const int dmax = static_cast<int>(std::ceil(x));
  const std::vector<int> mu = mobius_table(std::max(dmax, 1));
  // primitive(x) = sum_d mu(d) * #{w != 0 : d^2 |w|^2 < x^2}
  long long primitive = 0;
  for (int d = 1; d <= dmax; ++d) {
    const int mu_d = mu[static_cast<std::size_t>(d)];
    if (mu_d == 0) continue;
    const std::uint64_t nonzero = ball_count(k, limit, static_cast<long double>(d) * d);
    if (nonzero <= 1) continue;
    primitive += mu_d * static_cast<long long>(nonzero - 1);
  }
  return static_cast<std::uint64_t>(primitive / 2);
}

std::vector<std::vector<std::int64_t>> enumerate_lines(int k, double x) {
  check_line_args(k, x);
  const auto r = static_cast<std::int64_t>(std::ceil(x));
  if (std::pow(2.0 * static_cast<double>(r) + 1.0, k) > 2e8) throw std::invalid_argument("enumerate_lines: box too large");
  const long double limit = static_cast<long double>(x) * static_cast<long double>(x);
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> v(static_cast<std::size_t>(k), -r);
  for (;;) {
    long double norm = 0;
    std::int64_t g = 0;
    int first_nonzero_sign = 0;
    for (std::int64_t c : v) {
      norm += static_cast<long double>(c) * static_cast<long double>(c);
      g = std::gcd(g, c);
      if (first_nonzero_sign == 0 && c != 0) first_nonzero_sign = c > 0 ? 1 : -1;
    }
    if (g == 1 && first_nonzero_sign > 0 && norm < limit) out.push_back(v);
    int t = k - 1;
    while (t >= 0 && ++v[static_cast<std::size_t>(t)] > r) {
      v[static_cast<std::size_t>(t)] = -r;
      --t;
    }
    if (t < 0) break;
  }
  return out;
}

TailReport tail_sum(int k, int d, double x_max) {
  if (k < 1) throw std::invalid_argument("tail_sum: k must be >= 1");
  if (k >= d) throw std::invalid_argument("tail_sum: need k < d for convergence");
  TailReport report;
  report.k = k;
  report.d = d;
  report.x_max = x_max;
  const auto lines = enumerate_lines(k, x_max);
  int max_j = 0;
  while (std::ldexp(1.0, max_j + 1) < x_max) ++max_j;
  report.blocks.resize(static_cast<std::size_t>(max_j + 1));
  for (int j = 0; j <= max_j; ++j) report.blocks[static_cast<std::size_t>(j)].j = j;
  for (const auto& v : lines) {
    std::int64_t sq = 0;
    for (std::int64_t c : v) sq = checked_add(sq, checked_mul(c, c));
    // j with 4^j <= |v|^2 < 4^{j+1}
    int j = 0;
    while (j + 1 <= max_j && (std::int64_t{1} << (2 * (j + 1))) <= sq) ++j;
    HeightBlock& b = report.blocks[static_cast<std::size_t>(j)];
    ++b.lines;
    b.block_sum += std::pow(static_cast<double>(sq), -0.5 * d);
  }
  double running = 0.0;
  for (auto& b : report.blocks) {
    running += b.block_sum;
    b.partial_sum = running;
  }
  report.total = running;
  return report;
}

double fit_block_constant(const TailReport& report) {
  double c = 0.0;
  for (const auto& b : report.blocks) c = std::max(c, b.block_sum * std::ldexp(1.0, (report.d - report.k) * b.j));
  return c;
}

double block_decay_slope(const TailReport& report) {
  std::vector<double> xs, ys;
  for (const auto& b : report.blocks) {
    if (b.block_sum <= 0) continue;
    xs.push_back(b.j);
    ys.push_back(std::log2(b.block_sum));
  }
  if (xs.size() < 2) return 0.0;
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
  return sxy / sxx;
}

}  // namespace qdioph

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "qdioph/numberfield.hpp"
#include "qdioph/psi.hpp"

namespace qdioph {

/// One instance of the congruence-restricted approximation problem
///
///   ||theta q + p||^m <= psi(||q||^n),  1 <= ||q||^n < T,  (p, q) = v mod I
///
/// over (p, q) in O^m x O^n. v holds the p-part first, then the q-part.
struct ProblemSpec {
  FieldSpec field{1};
  int m = 1;
  int n = 2;
  PsiSpec psi = PsiSpec::constant(1.0);
  std::vector<QuadInt> v;
  IdealRep ideal = unit_ideal();
  double T = 2.0;
  // d = m + n = 2 is outside the counting theorem; only allowed on request.
  bool allow_d2 = false;

  int d() const { return m + n; }
  bool theorem_backed() const { return d() >= 3; }
  /// Throws std::invalid_argument on any violated precondition.
  void validate() const;
};

/// Complex m x n matrix, row-major.
class Theta {
 public:
  Theta(int m, int n);
  Theta(int m, int n, std::vector<std::complex<double>> entries);
  static Theta zero(int m, int n) { return Theta(m, n); }

  int rows() const { return m_; }
  int cols() const { return n_; }
  std::complex<double> operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  std::complex<double>& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  const std::vector<std::complex<double>>& entries() const { return entries_; }

 private:
  int m_;
  int n_;
  std::vector<std::complex<double>> entries_;
};

struct CountReport {
  std::uint64_t count = 0;
  double T = 0.0;
  double predicted = 0.0;  // alpha_F^d(E_T)
  double ratio = 0.0;      // count / predicted, 0 when predicted == 0
  std::uint64_t q_enumerated = 0;
  double wall_time = 0.0;  // seconds
  bool theorem_backed = true;
};

/// Number of solutions, enumerating q over the translated ideal lattice and
/// counting each p-coordinate in its disc independently.
CountReport count_solutions(const ProblemSpec& spec, const Theta& theta, unsigned threads = 1);

/// Partial count over shard `shard` of `shard_count`; the shards partition
/// the admissible q (by the index of q_1 in enumeration order).
struct ShardCount {
  std::uint64_t count = 0;
  std::uint64_t q_enumerated = 0;
};
ShardCount count_solutions_shard(const ProblemSpec& spec, const Theta& theta, std::size_t shard,
                                 std::size_t shard_count);

/// Independent oracle: filters every (p, q) in a bounding box. T <= 1e4.
std::uint64_t count_brute_force(const ProblemSpec& spec, const Theta& theta);

/// #{w in translate + I : |embed(w) - center| <= radius}.
std::uint64_t disc_lattice_count(const FieldSpec& f, const IdealRep& ideal, const QuadInt& translate,
                                 std::complex<double> center, double radius);

/// Calls visit(w, |w - c|^2) for every w in translate + I with |w - c|^2 <= bound,
/// where the center is given by real coordinates (c0, c1) in the basis {1, omega}.
/// Distances use the exact quadratic form in extended precision.
void for_each_in_disc(const FieldSpec& f, const IdealRep& ideal, const QuadInt& translate, long double c0,
                      long double c1, long double bound,
                      const std::function<void(const QuadInt&, long double)>& visit);

/// Real coordinates of z in the basis {1, omega}.
std::pair<long double, long double> coordinates_of(const FieldSpec& f, std::complex<long double> z);

/// -(theta q)_i for each row i, in extended precision.
std::vector<std::complex<long double>> disc_centers(const FieldSpec& f, const Theta& theta,
                                                    const std::vector<QuadInt>& q);

}  // namespace qdioph

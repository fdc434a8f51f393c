#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdioph/intmat.hpp"
#include "qdioph/numberfield.hpp"
#include "qdioph/rational.hpp"

namespace qdioph {

/// Element a + b*omega of F with rational coordinates (b = 0 over Q).
struct QuadRational {
  Rational a;
  Rational b;

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  friend bool operator==(const QuadRational&, const QuadRational&) = default;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

/// m x k row-reduced echelon form of rank m, stored row-major.
struct EchelonForm {
  int m = 0;
  int k = 0;
  std::vector<int> pivots;  // zero-based, strictly increasing
  std::vector<QuadRational> entries;

  const QuadRational& at(int i, int j) const { return entries[static_cast<std::size_t>(i * k + j)]; }
  std::string to_string() const;
  friend bool operator==(const EchelonForm&, const EchelonForm&) = default;
};

/// Unit pivots, zeros elsewhere in pivot columns and left of each pivot,
/// strictly increasing pivots, and no zero column.
bool is_valid_echelon(const EchelonForm& form);

/// Every rank-m, no-zero-column echelon form whose free entries have
/// coordinates num/den with |num| <= bound and 1 <= den <= bound (over F:
/// both coordinates in the basis {1, omega}). Ordered by pivot set, then
/// lexicographically by entry value index.
std::vector<EchelonForm> echelon_enumerate(int m, int k, int bound, const std::optional<FieldSpec>& field = std::nullopt);

/// Row-reduced echelon form over Q; `pivots` receives the pivot columns.
RationalMatrix reduced_row_echelon(RationalMatrix a, std::vector<int>* pivots = nullptr);

struct DecompositionReport {
  std::uint64_t matrices = 0;  // matrices with no zero column
  std::uint64_t existence_failures = 0;
  std::uint64_t uniqueness_failures = 0;
  std::vector<std::uint64_t> by_rank;  // by_rank[m] = matrices with X = X'D, D of rank m
};

/// Exhaustively checks that every X in M_{d,k}(Z), entries in [-g, g], with
/// no zero column factors uniquely as X = X' D with X' of full column rank m
/// and D an m x k echelon form with no zero column. Uniqueness is checked over
/// all pivot sets, not only over bounded D.
DecompositionReport decomposition_check(int d, int k, int grid_bound);

struct LatticeBasis {
  IntMatrix basis;  // rows, Hermite normal form
  bool saturated = false;
};

/// span_Q(rows) ∩ Z^N. Throws std::invalid_argument for dependent rows.
LatticeBasis lattice_saturation(const RationalMatrix& rows);

/// sqrt(det(B B^T)).
double lattice_determinant(const LatticeBasis& basis);

/// Covolume d(Lambda_D) of the integer points of the row space of D. Over F the
/// rows are mapped to Q^{2k} through the {1, omega} coordinates together with
/// their omega-multiples, which spans the same F-subspace.
double subspace_height(const EchelonForm& form, const std::optional<FieldSpec>& field = std::nullopt);

/// Number of lines in Q^k of height < x (primitive integer vectors up to
/// sign with Euclidean length < x). Requires k >= 1 and x <= 1000.
std::uint64_t subspace_count(int k, double x);

/// Primitive representatives (first nonzero coordinate positive) of the lines
/// counted by subspace_count, in lexicographic order.
std::vector<std::vector<std::int64_t>> enumerate_lines(int k, double x);

struct HeightBlock {
  int j = 0;                 // heights in [2^j, 2^{j+1})
  std::uint64_t lines = 0;
  double block_sum = 0.0;    // S_j = sum of height^{-d}
  double partial_sum = 0.0;  // sum over all blocks up to j
};

struct TailReport {
  int k = 0;
  int d = 0;
  double x_max = 0.0;
  std::vector<HeightBlock> blocks;
  double total = 0.0;
};

/// Partial sums of sum_U d(Lambda_U)^{-d} over lines of height < x_max,
/// grouped dyadically. Requires 1 <= k < d.
TailReport tail_sum(int k, int d, double x_max);

/// Smallest C with S_j <= C 2^{(k-d) j} for every block.
double fit_block_constant(const TailReport& report);
/// Least-squares slope of log2 S_j against j over nonempty blocks.
double block_decay_slope(const TailReport& report);

}  // namespace qdioph

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "qdioph/numberfield.hpp"
#include "qdioph/psi.hpp"
#include "qdioph/rng.hpp"

namespace qdioph {

enum class RegionKind {
  kET,      // ||x||^m <= psi(||y||^n),                        1 <= ||y||^n < T
  kEMinus,  // ||x||^m <= psi((1+e)||y||^n)/(1+e),            3/2 <= ||y||^n < T/(1+e)
  kEPlus,   // E' u C0, E': ||x||^m <= (1+e)psi(||y||^n/(1+e)), 3/2 <= ||y||^n <= (1+e)T
  kC0,      // ||x||^m <= 2 psi(1),                           1/2 <= ||y||^n <= 3/2
};

std::string to_string(RegionKind kind);
/// Accepts "E_T", "E_T_eps_minus", "E_T_eps_plus", "C0". Throws std::invalid_argument.
RegionKind parse_region_kind(const std::string& name);

/// Archimedean region in C^m x C^n. Norms are the squared complex modulus,
/// taken as a supremum over coordinates.
struct RegionSpec {
  RegionKind kind = RegionKind::kET;
  int m = 1;
  int n = 1;
  PsiSpec psi = PsiSpec::constant(1.0);
  double T = 2.0;
  double eps = 0.1;

  int d() const { return m + n; }
  void validate() const;
};

bool membership(const RegionSpec& region, std::span<const std::complex<double>> point);

/// Standard 2d-dimensional Lebesgue volume ("vol").
double volume_archimedean(const RegionSpec& region);
/// alpha_inf^d = 2^d vol, the measure normalization at the complex place.
double alpha_infinity(const RegionSpec& region);
/// 2^d |Delta_F|^{-d/2} N(I)^{-d}.
double adelic_factor(const FieldSpec& f, const IdealRep& ideal, int d);
/// alpha_F^d of the region times the congruence box v + I at the finite places.
double adelic_volume(const RegionSpec& region, const FieldSpec& f, const IdealRep& ideal);

struct MonteCarloVolume {
  double volume = 0.0;  // vol convention
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Rejection estimate of volume_archimedean, stratified by the ||y||^n shell.
/// Strata use independent streams (seed, stratum), so the result does not
/// depend on `threads`.
MonteCarloVolume monte_carlo_volume(const RegionSpec& region, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 1);

/// Uniform random points of a region, by rejection from its shell strata.
class RegionSampler {
 public:
  explicit RegionSampler(const RegionSpec& region);
  Eigen::VectorXcd sample(Stream& rng) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct SandwichReport {
  std::uint64_t violations_minus = 0;  // points of E^- outside h E_T
  std::uint64_t violations_plus = 0;   // points of h E_T outside E^+
  std::uint64_t samples = 0;
};

/// True iff h is block lower triangular (m x m block alpha, n x n block gamma)
/// with | det(alpha) det(gamma) |^2 = 1 within tol.
bool in_subgroup_h(const Eigen::MatrixXcd& h, int m, int n, double tol = 1e-12);

/// Random element of H with ||h - 1||_F <= distance (hence also in operator norm).
Eigen::MatrixXcd random_h_near_identity(int m, int n, double distance, Stream& rng);

/// Empirical check of E^-_{T,eps} within h E_T within E^+_{T,eps}. Requires
/// T > 10, eps in (0, 1/2) and h in H; throws std::invalid_argument otherwise.
SandwichReport sandwich_check(int m, int n, const PsiSpec& psi, double T, double eps,
                              const Eigen::MatrixXcd& h, std::uint64_t sample_count, std::uint64_t seed);

}  // namespace qdioph

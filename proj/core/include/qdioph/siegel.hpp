#pragma once

#include <array>
#include <cstdint>

#include "qdioph/rng.hpp"

namespace qdioph {

/// Unimodular lattice in R^2 given by its basis rows.
struct PlanarLattice {
  std::array<std::array<double, 2>, 2> basis{};
  double x = 0.0;  // fundamental-domain point the lattice came from
  double y = 1.0;

  double determinant() const { return basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]; }
};

/// Draws a lattice from the invariant probability measure on SL_2(R)/SL_2(Z)
/// modulo rotations: (x, y) has density proportional to y^{-2} on
/// {|x| <= 1/2, x^2 + y^2 >= 1}.
PlanarLattice sample_modular_lattice(Stream& rng);

/// #{v in L \ {0} : |v| <= radius}.
std::uint64_t lattice_disc_count(const PlanarLattice& lattice, double radius);

struct SiegelReport {
  double radius = 0.0;
  std::uint64_t samples = 0;
  double mean_count = 0.0;
  double std_error = 0.0;
  double target_area = 0.0;  // pi r^2
};

/// Monte Carlo mean of lattice_disc_count over sampled lattices. Samples are
/// split into fixed-size shards with independent streams, so the result does
/// not depend on `threads`.
SiegelReport siegel_mc_check(double radius, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

/// Closed form of E[1/y] under the sampling measure: 3 ln 3 / (2 pi).
double modular_mean_inverse_height();

}  // namespace qdioph

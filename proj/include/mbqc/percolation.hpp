#pragma once

#include <cstdint>
#include <vector>

#include "mbqc/rng.hpp"

namespace mbqc {

/// L x L occupancy grid, row-major.
struct Lattice {
  int side = 0;
  std::vector<std::uint8_t> occupied;

  bool at(int row, int col) const { return occupied[row * side + col] != 0; }
  double occupied_fraction() const;
};

/// Independent site occupation with probability p_site.
Lattice sample_lattice(int side, double p_site, SplitMix64& rng);

/// True iff a 4-connected path of occupied sites joins the left and right
/// boundary columns (union-find with virtual boundary nodes).
bool spans(const Lattice& lattice);

struct PercolationEstimate {
  double p_site = 0.0;
  int side = 0;
  int trials = 0;
  double spanning_probability = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo crossing probability. Trial t draws its own generator from
/// (seed, t), so the estimate is reproducible for any thread count.
PercolationEstimate spanning_probability(int side, double p_site, int trials,
                                         std::uint64_t seed, int threads = 1);

/// Site occupation probability where the crossing probability reaches 1/2:
/// 12 bisection steps on [0, 1] at fixed side length. Finite-size estimate
/// of the square-lattice threshold (0.5927... in the large-L limit).
double estimate_threshold(int side, int trials_per_point, std::uint64_t seed,
                          int threads = 1);

/// Success probability of the deformation-undoing filter: 2 l^2 / (1 + l^2),
/// independent of the system size.
double deformed_p_site(double lambda);

/// Inverse of deformed_p_site: lambda_c = sqrt(p_c / (2 - p_c)).
double deformed_threshold(double p_c);

/// Per-site two-outcome filter sampling on a deformed grid; failures are
/// heralded holes. Distributionally identical to sample_lattice at
/// p = deformed_p_site(lambda).
Lattice povm_hole_sampler(double lambda, int side, SplitMix64& rng);

}  // namespace mbqc

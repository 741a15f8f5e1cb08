#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/rng.hpp"

namespace mbqc {

using complexd = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

/// Thrown when an operation would materialize state beyond the dense cap.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense simulation cap in qubits (default 14). Mutable so callers with more
/// memory can raise it; constructors allocating 2^n amplitudes check it.
int& dense_qubit_limit();

enum class Pauli { I, X, Y, Z };

Pauli pauli_from_char(char c);
char pauli_to_char(Pauli p);

/// Normalized pure state of n >= 1 qubits, 2^n dense amplitudes.
/// Qubit 0 is the most significant bit of the basis index:
/// |q0 q1 ... q_{n-1}> sits at index q0*2^{n-1} + ... + q_{n-1}.
class PureState {
 public:
  PureState(int n, std::vector<complexd> amplitudes);

  /// Rescales to unit norm before constructing; rejects (near-)zero vectors.
  static PureState normalized(int n, std::vector<complexd> amplitudes);

  static PureState computational(int n, std::uint64_t basis_index);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const complexd> amplitudes() const { return amps_; }
  complexd amplitude(std::size_t index) const { return amps_.at(index); }

  static bool basis_bit(std::uint64_t index, int n, int qubit) {
    return (index >> (n - 1 - qubit)) & 1ULL;
  }

 private:
  int n_;
  std::vector<complexd> amps_;
};

/// Finite convex mixture of pure states with equal qubit counts.
class Ensemble {
 public:
  using Term = std::pair<double, PureState>;

  explicit Ensemble(std::vector<Term> terms);
  static Ensemble pure(PureState psi);

  int num_qubits() const;
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
};

/// Simple undirected graph; edges stored as (u, v) with u < v, deduplicated.
class Graph {
 public:
  explicit Graph(int num_vertices,
                 std::vector<std::pair<int, int>> edges = {});

  static Graph path(int n);
  static Graph cycle(int n);
  static Graph grid(int rows, int cols);

  int num_vertices() const { return num_vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int u, int v) const;
  std::vector<int> neighbors(int v) const;

 private:
  int num_vertices_;
  std::vector<std::pair<int, int>> edges_;
};

/// Nonempty proper subset of qubits (side A) and its complement (side B).
class Bipartition {
 public:
  Bipartition(int num_qubits, std::vector<int> side_a);

  int num_qubits() const { return n_; }
  const std::vector<int>& side_a() const { return side_a_; }
  const std::vector<int>& side_b() const { return side_b_; }

 private:
  int n_;
  std::vector<int> side_a_;
  std::vector<int> side_b_;
};

// ---------------------------------------------------------------------------
// State families

/// (|0..01> + |0..10> + ... + |10..0>)/sqrt(n); weight-one basis vectors.
PureState make_w_state(int n);

/// (|0...0> + |1...1>)/sqrt(2).
PureState make_ghz(int n);

/// Controlled-phase along every edge applied to the all-plus product state.
PureState make_graph_state(const Graph& g);

/// Graph state filtered sitewise by diag(1, lambda), renormalized. The
/// squared overlap with the undeformed graph state is
/// ((1+lambda)^2 / (2 (1+lambda^2)))^M with M = vertex count.
PureState make_deformed_cluster(const Graph& g, double lambda);

// ---------------------------------------------------------------------------
// Distances

/// Squared-overlap fidelity |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// <b| rho_a |b> = sum_i p_i |<psi_i|b>|^2.
double fidelity(const Ensemble& a, const PureState& b);

/// Half the trace norm of rho_a - rho_b, computed from the eigenvalues of
/// the difference operator projected onto the span of the ensemble terms.
/// Equals sqrt(1 - F) for two pure states.
double trace_distance(const Ensemble& a, const Ensemble& b);
double trace_distance(const PureState& a, const PureState& b);
double trace_distance(const Ensemble& a, const PureState& b);
double trace_distance(const PureState& a, const Ensemble& b);

/// Schmidt coefficients (singular values) across the cut, descending;
/// min(2^|A|, 2^|B|) entries, squared values summing to one.
std::vector<double> schmidt_coefficients(const PureState& psi,
                                         const Bipartition& cut);

// ---------------------------------------------------------------------------
// Dense utilities

/// Applies the 2x2 matrix {{m00, m01}, {m10, m11}} to one qubit.
PureState apply_one_qubit(const PureState& psi, int qubit, complexd m00,
                          complexd m01, complexd m10, complexd m11);

PureState apply_pauli(const PureState& psi, int qubit, Pauli p);

PureState tensor(const PureState& a, const PureState& b);

/// psi (x) |0>^k, appended as new trailing qubits.
PureState extend_with_zero_qubits(const PureState& psi, int count);

/// Partial trace over `qubits` (sorted, distinct), returned as the ensemble
/// of projections onto the computational basis of the discarded subsystem.
Ensemble discard_qubits(const Ensemble& rho, const std::vector<int>& qubits);
Ensemble discard_qubits(const PureState& psi, const std::vector<int>& qubits);

/// <bra| applied to one qubit: unnormalized residual on the remaining n-1
/// qubits. bra is given as ket components (b0, b1); the conjugate is taken
/// internally.
std::vector<complexd> contract_qubit(std::span<const complexd> amps, int n,
                                     int qubit,
                                     const std::array<complexd, 2>& bra);

// ---------------------------------------------------------------------------
// Random states

/// Haar-random pure state (normalized complex gaussian vector).
PureState random_state(int n, SplitMix64& rng);

/// Haar-random single-qubit state.
std::array<complexd, 2> random_qubit(SplitMix64& rng);

/// Haar-random 2x2 unitary, row-major {u00, u01, u10, u11}.
std::array<complexd, 4> random_unitary2(SplitMix64& rng);

}  // namespace mbqc

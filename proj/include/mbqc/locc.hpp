#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbqc/criteria.hpp"
#include "mbqc/qstate.hpp"

namespace mbqc {

/// One single-qubit measurement. The basis follows the Bloch convention
///   b0 = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
///   b1 = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>
/// so theta = pi/2 is the equatorial family and theta = 0 the computational
/// basis. `feedforward` maps the full prior-outcome bitstring to a Pauli
/// applied to this qubit before measuring (absent keys mean identity);
/// applying X this way flips the sign of the equatorial angle, which is how
/// adaptive bases are realized.
struct MeasureStep {
  int qubit = 0;
  double theta = 1.5707963267948966;
  double phi = 0.0;
  std::map<std::string, Pauli> feedforward;

  std::array<complexd, 2> basis_vector(int outcome) const;
};

/// Ordered measurement program with declared output qubits and a read-out
/// Pauli frame: frame[bits] is one Pauli character per output qubit, applied
/// to the residual state after the last step. Byproduct tracking at read-out
/// is equivalent to mid-circuit correction for the protocols in scope.
struct Protocol {
  std::vector<MeasureStep> steps;
  std::vector<int> outputs;
  std::map<std::string, std::string> frame;

  void validate(int num_qubits) const;
};

nlohmann::json protocol_to_json(const Protocol& p);
Protocol protocol_from_json(const nlohmann::json& j);

/// One measurement history: outcome bits, Born probability, and the
/// (frame-corrected) residual state on the output qubits. Residuals from
/// ensemble inputs are sub-ensembles merged by the classical record; a
/// protocol measuring every qubit leaves no residual.
struct BranchLeaf {
  std::string bits;
  double probability = 0.0;
  std::optional<Ensemble> residual;
};

struct BranchTree {
  std::vector<BranchLeaf> leaves;
  int pruned = 0;              // zero-probability branches dropped
  double probability_sum = 0.0;

  /// All branches pooled into a single mixture (the record is discarded).
  Ensemble merged() const;
};

inline constexpr std::size_t kDefaultBranchCap = std::size_t{1} << 20;

/// Exhaustive Born-rule execution: 2^steps branches, each with its exact
/// probability and residual. Measured qubits are projected out and removed;
/// compare against padded targets with extend_with_zero_qubits.
BranchTree run_protocol(const Ensemble& state, const Protocol& protocol,
                        std::size_t branch_cap = kDefaultBranchCap);
BranchTree run_protocol(const PureState& state, const Protocol& protocol,
                        std::size_t branch_cap = kDefaultBranchCap);

/// Per-branch Pauli corrections (over the output qubits) that map every leaf
/// of a deterministic-modulo-Pauli tree onto the first leaf's pure state.
/// Throws if some branch is not Pauli-equivalent to the first.
std::map<std::string, std::string> solve_pauli_frame(const BranchTree& tree);

// ---------------------------------------------------------------------------
// Protocol builders

struct RotationProtocol {
  Protocol protocol;
  PureState target;  // the state every branch yields after frame correction
};

/// Measurement program on the n-qubit linear cluster: qubits 0..n-2 measured
/// equatorially with the given angles (angles[0] is conventionally 0) and
/// adaptive sign flips; the output qubit n-1 carries
/// H P(-angles[n-2]) ... H P(-angles[0]) |+> on every branch, each branch
/// with probability 2^-(n-1).
RotationProtocol chain_rotation_protocol(int n, std::span<const double> angles);

/// The single-qubit rotation primitive on the 5-qubit linear cluster:
/// four equatorial measurements with angles (0, xi, eta, zeta), sixteen
/// uniform branches.
RotationProtocol one_way_rotation(double xi, double eta, double zeta);

/// Two parallel wires on the 2x2 grid cluster: qubits 0 and 2 measured
/// equatorially, outputs 1 and 3, four uniform branches.
RotationProtocol grid2x2_protocol(double alpha, double beta);

// ---------------------------------------------------------------------------
// Experiments

/// Noise component: weight lambda_k and a Z-pattern bitmask (bit q set means
/// a phase flip on qubit q).
struct ZPattern {
  double weight = 1.0;
  std::uint64_t mask = 0;
};

struct NoisyClusterReport {
  double p = 0.0;
  int measured_qubits = 0;
  int branches = 0;
  double max_branch_distance = 0.0;   // max_k D(rho_k, target)
  double distance_bound = 0.0;        // p (+ tolerance at the check)
  double max_probability_deviation = 0.0;  // from the uniform 2^-m law
  double averaged_fidelity = 0.0;     // F(sum_k p_k rho_k, target)
  bool distances_ok = false;
  bool probabilities_ok = false;
};

/// Runs `protocol` on (1-p)|C><C| + p sum_k lambda_k |C^k><C^k| where C is
/// the graph state of g and C^k applies the k-th Z pattern. Verifies the
/// per-branch distance bound D(rho_k, target) <= p and the uniform branch
/// law. The target is the protocol's deterministic output on the clean
/// state, which is checked first.
NoisyClusterReport noisy_cluster_experiment(const Graph& g,
                                            std::span<const ZPattern> noise,
                                            double p,
                                            const Protocol& protocol);

/// Single phase flip on one qubit, the two-term special case.
NoisyClusterReport noisy_cluster_experiment(const Graph& g, int flip_qubit,
                                            double p,
                                            const Protocol& protocol);

struct FidelityCheckReport {
  double fidelity = 0.0;
  double threshold = 0.0;  // (1 - eps)(1 - delta)
  bool pass = false;
};

/// F(sum_k p_k rho_k, target) >= (1 - eps)(1 - delta) for a tree produced
/// under declared (eps, delta) guarantees.
FidelityCheckReport averaged_fidelity_check(const BranchTree& tree,
                                            const PureState& target,
                                            double eps, double delta);

struct StabilityReport {
  double mu = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double output_distance = 0.0;    // D(rho~_A, target)
  double distance_bound = 0.0;     // mu + eps + delta
  double measured_fidelity = 0.0;  // F(rho~_A, target)
  double fidelity_bound = 0.0;     // 1 - eta(mu + eps + delta)
  std::vector<FrontierPoint> frontier;
  bool pass = false;
};

/// Replays the same protocol on a perturbed resource with
/// D(base, perturbed) = mu and checks the degradation bounds: the pooled
/// output stays within mu + eps + delta of the target in trace distance and
/// within eta(mu + eps + delta) of it in fidelity loss.
StabilityReport stability_experiment(const Ensemble& base,
                                     const Ensemble& perturbed,
                                     const Protocol& protocol,
                                     const PureState& target, double eps,
                                     double delta);

}  // namespace mbqc

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/qstate.hpp"

namespace mbqc {

enum class BoundKind { exact, lower_bound, upper_bound };

std::string to_string(BoundKind k);

/// Leaf-labeled tree whose vertices all have degree 1 or 3. Leaves are
/// vertices 0..num_leaves-1 and are identified with qubits; internal
/// vertices follow. (The two-leaf tree is a single edge.)
struct SubcubicTree {
  int num_leaves = 0;
  std::vector<std::pair<int, int>> edges;

  int num_vertices() const { return num_leaves + num_internal(); }
  int num_internal() const { return num_leaves <= 2 ? 0 : num_leaves - 2; }

  /// Throws unless the tree is connected, acyclic, and subcubic with
  /// exactly num_leaves degree-1 vertices 0..num_leaves-1.
  void validate() const;

  /// For every edge, the set of leaves on the lower-vertex side after the
  /// edge is removed; each set with its complement is the induced cut.
  std::vector<std::vector<int>> edge_leaf_sets() const;

  /// Same cuts as leaf bitmasks (one side per edge), computed in a single
  /// traversal; the cheap path for width optimizations.
  std::vector<std::uint64_t> edge_leaf_masks() const;
};

/// Value of a monotone together with how trustworthy it is. kind == exact is
/// only set by methods that guarantee global optimality (exhaustive tree
/// enumeration, closed forms).
struct MonotoneResult {
  double value = 0.0;
  BoundKind kind = BoundKind::lower_bound;
  std::string method;
  int iterations = 0;
  int restarts = 0;
  bool converged = true;
  /// Best product witness found, one (a, b) local state per qubit.
  std::vector<std::array<complexd, 2>> witness_product;
  /// Minimizing tree for width-style measures.
  std::optional<SubcubicTree> witness_tree;
  /// Per-size values for family suprema, (size in qubits, value).
  std::vector<std::pair<int, double>> per_size;
};

/// Calls fn for every leaf-labeled subcubic tree with n leaves, generated by
/// inserting leaf k into every edge of every (k-1)-leaf tree. Yields exactly
/// (2n-5)!! trees for n >= 3. Returning false from fn stops early.
void for_each_subcubic_tree(int n,
                            const std::function<bool(const SubcubicTree&)>& fn);

/// Materialized enumeration; capacity-checked against cap (default 10).
std::vector<SubcubicTree> enumerate_subcubic_trees(int n);

int& tree_leaf_limit();

double double_factorial_odd(int k);  // k!! for odd k >= -1

// ---------------------------------------------------------------------------
// Geometric measure

struct OverlapOptions {
  int restarts = 32;
  double tol = 1e-10;       // stop when the overlap gain per sweep drops below
  int max_sweeps = 500;
  std::uint64_t seed = 0x5eed;
  /// Extra starting points tried in addition to the random restarts.
  std::vector<std::vector<std::array<complexd, 2>>> initial_guesses;
};

/// Best squared overlap with a fully product state, by multi-start
/// alternating optimization over the local states. A lower bound on the true
/// maximum; the witness attaining it is recorded.
MonotoneResult product_overlap(const PureState& psi,
                               const OverlapOptions& opts = {});

/// 1 - product_overlap; an upper bound on the geometric measure since the
/// overlap is approached from below.
MonotoneResult geometric_measure(const PureState& psi,
                                 const OverlapOptions& opts = {});

/// sum_i p_i E_G(psi_i) for the given decomposition; an upper bound on the
/// convex-roof value, which minimizes over all decompositions.
MonotoneResult geometric_measure_ensemble_ub(const Ensemble& rho,
                                             const OverlapOptions& opts = {});

// ---------------------------------------------------------------------------
// Width measures

inline constexpr double kDefaultRankTol = 1e-8;

/// Number of Schmidt coefficients above rank_tol times the largest.
int schmidt_rank(const PureState& psi, const Bipartition& cut,
                 double rank_tol = kDefaultRankTol);

/// min over subcubic trees of the max edge-cut Schmidt rank; exact by
/// exhaustive enumeration. For n == 2 the single cut is reported.
MonotoneResult schmidt_rank_width(const PureState& psi,
                                  double rank_tol = kDefaultRankTol);

/// Same tree optimization with the base-2 entropy of the squared Schmidt
/// coefficients as the edge score.
MonotoneResult entropic_entanglement_width(const PureState& psi);

// ---------------------------------------------------------------------------
// State families and their suprema

enum class MeasureId { geometric, chi_width, entropic_width };

std::string to_string(MeasureId m);
MeasureId measure_from_string(const std::string& name);

/// Generator for a named family of states. `index` starts at min_index;
/// qubits(index) gives the member's size.
struct StateFamily {
  std::string name;
  int min_index = 2;
  std::function<int(int)> qubits;
  std::function<PureState(int)> member;
};

/// Registered families: w, ghz, cluster1d, cluster2d, deformed, product.
/// `param` is the deformation lambda (used by "deformed" only).
StateFamily state_family(const std::string& name, double param = 0.8);

struct FamilySupremumOptions {
  OverlapOptions overlap;
  double rank_tol = kDefaultRankTol;
};

/// Maximum of the measure over family members up to size_cap qubits, with
/// the per-size sequence attached. A lower bound on the family supremum;
/// width measures stop at the tree enumeration cap.
MonotoneResult family_supremum(const StateFamily& family, MeasureId measure,
                               int size_cap,
                               const FamilySupremumOptions& opts = {});

}  // namespace mbqc

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/epsilon.hpp"
#include "mbqc/monotones.hpp"

namespace mbqc {

// ---------------------------------------------------------------------------
// Measure registry: which axioms each measure satisfies. The criteria check
// these hypotheses before applying a theorem, and refuse otherwise.

struct MeasureAxioms {
  std::string name;
  bool vanishes_on_separable = false;  // P1
  bool locc_monotone = false;          // P2
  bool convex = false;                 // P3
  bool strong = false;                 // P4 (monotone on average)
  bool extendable = false;             // P5 (trivial extendability)
  bool weak_nonincreasing = false;     // P6 (implied by P4, kept separate)
  bool monotone = false;               // usable as an entanglement monotone
  /// The guaranteed-value supremum diverges as the ball shrinks.
  bool divergent_eps_star = false;
};

const MeasureAxioms& measure_axioms(MeasureId m);

// ---------------------------------------------------------------------------
// Family descriptors: declared metadata about named families, separate from
// the generators so the verdicts stay pure functions over descriptors.

enum class ScalingClass {
  constant,
  logarithmic,
  polylog,
  polynomial,
  exponential,
  unknown,
};

std::string to_string(ScalingClass s);
ScalingClass scaling_class_from_string(const std::string& s);

/// Growth order comparison: constant < logarithmic < polylog < polynomial
/// < exponential. `unknown` compares with nothing.
bool scaling_dominated_by(ScalingClass a, ScalingClass b);

/// The class of log(f) for a declared class of f.
ScalingClass log_of_scaling(ScalingClass f);

struct KnownSupremum {
  double value = 0.0;
  std::string provenance;
};

struct FamilyDescriptor {
  std::string name;
  std::map<MeasureId, KnownSupremum> known_suprema;
  std::map<MeasureId, ScalingClass> scaling;
};

/// Descriptors for w, ghz, cluster1d, cluster2d with the exactly known
/// suprema and growth classes attached.
FamilyDescriptor builtin_family(const std::string& name);

/// Consistency of a declared scaling class with the generated finite-size
/// value sequence (constant stays flat, growing classes never decrease).
bool verify_family_scaling(const FamilyDescriptor& desc, MeasureId measure,
                           int size_cap);

// ---------------------------------------------------------------------------
// Verdicts

enum class Decision { ruled_out, not_ruled_out };

std::string to_string(Decision d);

struct TraceEntry {
  std::string quantity;
  double value = 0.0;
  std::string provenance;
};

/// One-sided result of a necessary-condition check: ruled_out only when the
/// family's known entanglement (upper/exact value) falls strictly below the
/// lower bound the criterion demands; not_ruled_out never claims
/// universality.
struct Verdict {
  std::string family;
  std::string measure;
  std::string check;
  double eta = 0.0;
  double delta = 0.0;
  double family_value = 0.0;
  double required_value = 0.0;
  Decision decision = Decision::not_ruled_out;
  std::string note;
  std::vector<TraceEntry> trace;
};

/// Deterministic approximate preparation requires the family supremum to
/// reach the all-states guaranteed-measure supremum. Needs an extendable,
/// weakly non-increasing monotone.
Verdict check_approx_det(const FamilyDescriptor& family, double eta,
                         MeasureId measure);

/// Stochastic variant: the threshold scales by (1 - delta). Needs an
/// extendable strong monotone.
Verdict check_approx_stoch(const FamilyDescriptor& family, double eta,
                           double delta, MeasureId measure);

/// For measures whose guaranteed-value supremum diverges, any family with
/// bounded values is ruled out for every fixed delta < 1.
Verdict check_unbounded_measure(const FamilyDescriptor& family,
                                MeasureId measure, double delta);

/// Declared lower-bound growth f(N) of the square-grid cluster family for
/// the chosen measure; the efficiency criterion compares against log f.
struct GrowthDescriptor {
  ScalingClass cluster_bound_class = ScalingClass::exponential;
  std::string provenance =
      "default: exact-case growth of the square-grid family (exponential in "
      "sqrt(N)); override if a tighter bound is known";
};

/// Families whose measure values grow no faster than log f(N) cannot be
/// efficient universal resources.
Verdict check_efficiency(const FamilyDescriptor& family, MeasureId measure,
                         const GrowthDescriptor& f_eps = {});

// ---------------------------------------------------------------------------
// Numeric frontiers

/// Fidelity-loss budget where the star lower bound crosses 1 - 1/e: below
/// this eta the W family is ruled out as a deterministic approximate
/// resource. Bisection residual < 1e-9.
double w_threshold_eta();

struct FrontierPoint {
  double eps_prime = 0.0;
  double delta_prime = 0.0;
};

/// Degraded parameter pairs guaranteed achievable after perturbing an
/// (eps, delta) resource by mu: delta' eta(eps') >= eta(eps + delta + mu).
/// For the trace distance the frontier is the hyperbola
/// delta' eps' = eps + delta + mu, sampled on a grid of eps' values.
std::vector<FrontierPoint> stability_frontier(double eps, double delta,
                                              double mu, DistanceKind kind,
                                              int grid_points = 50);

}  // namespace mbqc

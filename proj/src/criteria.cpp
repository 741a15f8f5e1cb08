#include "mbqc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbqc {

const MeasureAxioms& measure_axioms(MeasureId m) {
  static const MeasureAxioms geometric{
      .name = "geometric",
      .vanishes_on_separable = true,
      .locc_monotone = true,
      .convex = true,
      .strong = true,
      .extendable = true,
      .weak_nonincreasing = true,
      .monotone = true,
      .divergent_eps_star = false,
  };
  static const MeasureAxioms chi_width{
      .name = "chi-width",
      .vanishes_on_separable = false,  // equals 1, not 0, on product states
      .locc_monotone = true,
      .convex = true,
      .strong = true,
      .extendable = true,
      .weak_nonincreasing = true,
      .monotone = true,
      .divergent_eps_star = true,
  };
  // The entropic width is not an entanglement monotone; it is computed for
  // reference but refused by every criterion.
  static const MeasureAxioms entropic_width{
      .name = "entropic-width",
      .vanishes_on_separable = true,
      .locc_monotone = false,
      .convex = false,
      .strong = false,
      .extendable = false,
      .weak_nonincreasing = false,
      .monotone = false,
      .divergent_eps_star = false,
  };
  switch (m) {
    case MeasureId::geometric:
      return geometric;
    case MeasureId::chi_width:
      return chi_width;
    case MeasureId::entropic_width:
      return entropic_width;
  }
  throw std::invalid_argument("unknown measure");
}

std::string to_string(ScalingClass s) {
  switch (s) {
    case ScalingClass::constant:
      return "constant";
    case ScalingClass::logarithmic:
      return "logarithmic";
    case ScalingClass::polylog:
      return "polylog";
    case ScalingClass::polynomial:
      return "polynomial";
    case ScalingClass::exponential:
      return "exponential";
    case ScalingClass::unknown:
      return "unknown";
  }
  return "?";
}

ScalingClass scaling_class_from_string(const std::string& s) {
  if (s == "constant") return ScalingClass::constant;
  if (s == "logarithmic") return ScalingClass::logarithmic;
  if (s == "polylog") return ScalingClass::polylog;
  if (s == "polynomial") return ScalingClass::polynomial;
  if (s == "exponential") return ScalingClass::exponential;
  if (s == "unknown") return ScalingClass::unknown;
  throw std::invalid_argument("unknown scaling class: " + s);
}

bool scaling_dominated_by(ScalingClass a, ScalingClass b) {
  if (a == ScalingClass::unknown || b == ScalingClass::unknown) return false;
  return static_cast<int>(a) <= static_cast<int>(b);
}

ScalingClass log_of_scaling(ScalingClass f) {
  switch (f) {
    case ScalingClass::exponential:
      return ScalingClass::polynomial;
    case ScalingClass::polynomial:
      return ScalingClass::logarithmic;
    case ScalingClass::polylog:
    case ScalingClass::logarithmic:
    case ScalingClass::constant:
      return ScalingClass::constant;
    case ScalingClass::unknown:
      return ScalingClass::unknown;
  }
  return ScalingClass::unknown;
}

std::string to_string(Decision d) {
  return d == Decision::ruled_out ? "ruled_out" : "not_ruled_out";
}

FamilyDescriptor builtin_family(const std::string& name) {
  FamilyDescriptor f;
  f.name = name;
  if (name == "w") {
    f.known_suprema[MeasureId::geometric] = {
        1.0 - 1.0 / std::exp(1.0), "limit of 1 - (1 - 1/N)^(N-1)"};
    f.known_suprema[MeasureId::chi_width] = {
        2.0, "every cut of a W state has Schmidt rank 2"};
    f.scaling[MeasureId::geometric] = ScalingClass::constant;
    f.scaling[MeasureId::chi_width] = ScalingClass::constant;
    return f;
  }
  if (name == "ghz") {
    f.known_suprema[MeasureId::geometric] = {
        0.5, "best product overlap of a GHZ state is 1/2 at every size"};
    f.known_suprema[MeasureId::chi_width] = {
        2.0, "every cut of a GHZ state has Schmidt rank 2"};
    f.scaling[MeasureId::geometric] = ScalingClass::constant;
    f.scaling[MeasureId::chi_width] = ScalingClass::constant;
    return f;
  }
  if (name == "cluster1d") {
    f.known_suprema[MeasureId::chi_width] = {
        2.0, "contiguous cuts of a 1D cluster have Schmidt rank <= 2"};
    f.scaling[MeasureId::geometric] = ScalingClass::constant;
    f.scaling[MeasureId::chi_width] = ScalingClass::constant;
    return f;
  }
  if (name == "cluster2d") {
    f.known_suprema[MeasureId::geometric] = {
        1.0, "limit of 1 - 2^(-N/2) for square-grid cluster states"};
    f.scaling[MeasureId::geometric] = ScalingClass::constant;
    f.scaling[MeasureId::chi_width] = ScalingClass::exponential;
    return f;
  }
  throw std::invalid_argument("no builtin descriptor for family: " + name);
}

bool verify_family_scaling(const FamilyDescriptor& desc, MeasureId measure,
                           int size_cap) {
  const auto it = desc.scaling.find(measure);
  if (it == desc.scaling.end() || it->second == ScalingClass::unknown)
    return true;  // nothing declared, nothing to contradict
  const StateFamily fam = state_family(desc.name);
  const MonotoneResult seq = family_supremum(fam, measure, size_cap);
  if (seq.per_size.size() < 2) return true;
  const double first = seq.per_size.front().second;
  double prev = -1.0;
  for (const auto& [sz, v] : seq.per_size) {
    if (it->second == ScalingClass::constant) {
      // Bounded class: flat for width measures; allow the slow saturation of
      // bounded-but-increasing sequences for continuous measures.
      if (measure != MeasureId::geometric && std::abs(v - first) > 1e-9)
        return false;
    } else if (v + 1e-9 < prev) {
      return false;  // declared growing but observed decreasing
    }
    prev = v;
  }
  return true;
}

namespace {

void require_axioms(const MeasureAxioms& ax, bool need_strong,
                    const std::string& check) {
  if (!ax.monotone)
    throw std::invalid_argument(
        check + ": " + ax.name +
        " is not an entanglement monotone, so the criterion does not apply");
  if (!ax.extendable)
    throw std::invalid_argument(check + ": " + ax.name +
                                " lacks trivial extendability (P5)");
  if (need_strong && !ax.strong)
    throw std::invalid_argument(check + ": " + ax.name +
                                " is not a strong monotone (P4)");
  if (!need_strong && !ax.weak_nonincreasing)
    throw std::invalid_argument(check + ": " + ax.name +
                                " is not weakly non-increasing (P6)");
}

Verdict stoch_verdict(const FamilyDescriptor& family, double eta, double delta,
                      MeasureId measure, const std::string& check_name,
                      bool need_strong) {
  const MeasureAxioms& ax = measure_axioms(measure);
  require_axioms(ax, need_strong, check_name);
  if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("delta must lie in [0, 1)");

  Verdict v;
  v.family = family.name;
  v.measure = ax.name;
  v.check = check_name;
  v.eta = eta;
  v.delta = delta;

  if (measure != MeasureId::geometric) {
    if (ax.divergent_eps_star) {
      // No finite threshold exists; route through the unbounded check.
      Verdict u = check_unbounded_measure(family, measure, delta);
      u.check = check_name;
      u.eta = eta;
      return u;
    }
    v.note = "no guaranteed-value threshold is implemented for this measure";
    v.decision = Decision::not_ruled_out;
    return v;
  }

  const EpsilonBound star = eps_geo_star_lower(eta);
  v.required_value = (1.0 - delta) * star.value;
  v.trace.push_back({"eta", eta, "fidelity-loss budget"});
  v.trace.push_back({"star_lower", star.value,
                     "1 - 4 eta^(1/3) + 3.4 eta^(2/3)"});
  v.trace.push_back({"required_value", v.required_value,
                     "(1 - delta) * star_lower"});
  if (!star.validity_ok)
    v.note = "eta exceeds the ~0.44 regime of the star bound";

  const auto known = family.known_suprema.find(measure);
  if (known == family.known_suprema.end()) {
    v.decision = Decision::not_ruled_out;
    v.note = "insufficient data: no known family supremum for " + ax.name;
    return v;
  }
  v.family_value = known->second.value;
  v.trace.push_back(
      {"family_value", v.family_value, known->second.provenance});
  v.decision = v.family_value < v.required_value ? Decision::ruled_out
                                                 : Decision::not_ruled_out;
  return v;
}

}  // namespace

Verdict check_approx_det(const FamilyDescriptor& family, double eta,
                         MeasureId measure) {
  return stoch_verdict(family, eta, 0.0, measure, "approx-deterministic",
                       /*need_strong=*/false);
}

Verdict check_approx_stoch(const FamilyDescriptor& family, double eta,
                           double delta, MeasureId measure) {
  return stoch_verdict(family, eta, delta, measure, "approx-stochastic",
                       /*need_strong=*/true);
}

Verdict check_unbounded_measure(const FamilyDescriptor& family,
                                MeasureId measure, double delta) {
  const MeasureAxioms& ax = measure_axioms(measure);
  require_axioms(ax, /*need_strong=*/true, "unbounded-measure");
  if (!ax.divergent_eps_star)
    throw std::invalid_argument(
        "unbounded-measure: " + ax.name +
        " has no divergent guaranteed-value supremum on record");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("delta must lie in [0, 1)");

  Verdict v;
  v.family = family.name;
  v.measure = ax.name;
  v.check = "unbounded-measure";
  v.delta = delta;
  v.required_value = std::numeric_limits<double>::infinity();
  v.trace.push_back({"required_value", v.required_value,
                     "the guaranteed-value supremum diverges"});

  const auto cls = family.scaling.find(measure);
  if (cls == family.scaling.end() || cls->second == ScalingClass::unknown) {
    v.decision = Decision::not_ruled_out;
    v.note = "insufficient data: unknown scaling class";
    return v;
  }
  const auto known = family.known_suprema.find(measure);
  if (known != family.known_suprema.end()) {
    v.family_value = known->second.value;
    v.trace.push_back(
        {"family_value", v.family_value, known->second.provenance});
  }
  v.decision = cls->second == ScalingClass::constant ? Decision::ruled_out
                                                     : Decision::not_ruled_out;
  v.trace.push_back({"scaling_class_bounded",
                     cls->second == ScalingClass::constant ? 1.0 : 0.0,
                     to_string(cls->second)});
  return v;
}

Verdict check_efficiency(const FamilyDescriptor& family, MeasureId measure,
                         const GrowthDescriptor& f_eps) {
  const MeasureAxioms& ax = measure_axioms(measure);
  require_axioms(ax, /*need_strong=*/true, "efficiency");

  Verdict v;
  v.family = family.name;
  v.measure = ax.name;
  v.check = "efficiency";

  const auto cls = family.scaling.find(measure);
  const ScalingClass family_class =
      cls == family.scaling.end() ? ScalingClass::unknown : cls->second;
  const ScalingClass log_class = log_of_scaling(f_eps.cluster_bound_class);
  v.trace.push_back({"family_scaling",
                     static_cast<double>(static_cast<int>(family_class)),
                     to_string(family_class)});
  v.trace.push_back({"cluster_bound_scaling",
                     static_cast<double>(
                         static_cast<int>(f_eps.cluster_bound_class)),
                     f_eps.provenance});
  v.trace.push_back({"log_bound_scaling",
                     static_cast<double>(static_cast<int>(log_class)),
                     to_string(log_class)});

  if (family_class == ScalingClass::unknown ||
      log_class == ScalingClass::unknown) {
    v.decision = Decision::not_ruled_out;
    v.note = "insufficient data: incomparable or unknown growth classes";
    return v;
  }
  v.decision = scaling_dominated_by(family_class, log_class)
                   ? Decision::ruled_out
                   : Decision::not_ruled_out;
  return v;
}

double w_threshold_eta() {
  const double target = 1.0 - 1.0 / std::exp(1.0);
  auto h = [&](double eta) { return eps_geo_star_lower(eta).value - target; };
  // The bound decreases until eta = (4/6.8)^3 and stays below the target
  // afterwards, so the smaller root is bracketed by (0, argmin).
  double lo = 1e-12;
  double hi = std::pow(4.0 / 6.8, 3.0);
  if (h(lo) <= 0.0 || h(hi) >= 0.0)
    throw std::runtime_error("threshold bracket failed");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double val = h(mid);
    if (std::abs(val) < 1e-12) return mid;
    (val > 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<FrontierPoint> stability_frontier(double eps, double delta,
                                              double mu, DistanceKind kind,
                                              int grid_points) {
  if (eps < 0.0 || delta < 0.0 || mu < 0.0)
    throw std::invalid_argument("eps, delta, mu must be >= 0");
  if (eps + delta >= 1.0)
    throw std::invalid_argument("hypothesis violated: eps + delta < 1");
  if (mu > 1.0 - delta - eps)
    throw std::invalid_argument("hypothesis violated: mu <= 1 - delta - eps");
  if (grid_points < 2) throw std::invalid_argument("grid needs >= 2 points");

  const EtaMap eta = eta_map(kind);
  const double budget_eta = eta(std::min(eta.max_eps, eps + delta + mu));
  std::vector<FrontierPoint> out;
  out.reserve(grid_points);
  if (budget_eta <= 0.0) {
    // Unperturbed deterministic exact resource: the frontier degenerates.
    for (int i = 0; i < grid_points; ++i) {
      const double ep = static_cast<double>(i) / (grid_points - 1);
      out.push_back({ep, 0.0});
    }
    return out;
  }
  // The grid starts where the minimal admissible delta' reaches 1; for the
  // trace distance that is eps' = eps + delta + mu.
  const double start = eps + delta + mu;
  for (int i = 0; i < grid_points; ++i) {
    const double ep =
        start + (eta.max_eps - start) * static_cast<double>(i) /
                    (grid_points - 1);
    out.push_back({ep, std::min(1.0, budget_eta / eta(ep))});
  }
  return out;
}

}  // namespace mbqc

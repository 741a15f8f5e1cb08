#include "mbqc/epsilon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbqc {

double eta_for_trace(double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("trace-distance epsilon must lie in [0, 1]");
  return eps;
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::trace:
      return "trace";
  }
  return "?";
}

double EtaMap::operator()(double eps) const {
  switch (kind) {
    case DistanceKind::trace:
      return eta_for_trace(eps);
  }
  throw std::invalid_argument("unregistered distance kind");
}

EtaMap eta_map(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::trace:
      return EtaMap{DistanceKind::trace, 1.0};
  }
  throw std::invalid_argument("unregistered distance kind");
}

std::string to_string(BoundFormula f) {
  switch (f) {
    case BoundFormula::variational:
      return "variational";
    case BoundFormula::closed_form:
      return "closed_form";
    case BoundFormula::star_lower:
      return "star_lower";
  }
  return "?";
}

namespace {

void check_eg_eta(double eg, double eta) {
  if (eg <= 0.0 || eg > 1.0)
    throw std::invalid_argument("Eg must lie in (0, 1]");
  if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
}

double variational_objective(double eg, double eta, double delta) {
  return (1.0 - eta / delta) * (eg - 3.0 * std::sqrt(delta));
}

double golden_section_max(double eg, double eta, double lo, double hi) {
  constexpr double inv_phi = 0.61803398874989484820;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = variational_objective(eg, eta, c);
  double fd = variational_objective(eg, eta, d);
  for (int i = 0; i < 160 && (b - a) > 1e-18; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = variational_objective(eg, eta, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = variational_objective(eg, eta, d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

EpsilonBound eps_geo_variational(double eg, double eta) {
  check_eg_eta(eg, eta);
  EpsilonBound out;
  out.formula = BoundFormula::variational;
  out.eta_used = eta;
  out.delta_star = std::pow((2.0 / 3.0) * eg * eta, 2.0 / 3.0);

  // The product lower-bounds the guaranteed value only while the second
  // factor stays nonnegative (Delta <= (Eg/3)^2); past that point both
  // factors can turn negative and the product is no longer a bound, so the
  // search is confined to the valid window.
  const double delta_max = (eg / 3.0) * (eg / 3.0);
  const bool star_valid = out.delta_star <= delta_max;
  const double f_star =
      star_valid ? variational_objective(eg, eta, out.delta_star)
                 : -std::numeric_limits<double>::infinity();

  constexpr int kGridPoints = 400;
  auto grid_point = [](int i) {
    return std::pow(10.0, -12.0 + 12.0 * i / (kGridPoints - 1.0));
  };
  double best = f_star;
  int best_idx = -1;
  for (int i = 0; i < kGridPoints; ++i) {
    const double delta = grid_point(i);
    if (delta > delta_max) break;
    const double f = variational_objective(eg, eta, delta);
    if (f > best) {
      best = f;
      best_idx = i;
    }
  }
  if (best_idx >= 0) {
    const double lo = grid_point(std::max(0, best_idx - 1));
    const double hi =
        std::min(delta_max, grid_point(std::min(kGridPoints - 1, best_idx + 1)));
    best = std::max(best, golden_section_max(eg, eta, lo, hi));
  }
  // Polish around the stationary candidate; the true maximizer of the
  // product form sits near but not exactly at delta_star.
  if (star_valid)
    best = std::max(best,
                    golden_section_max(eg, eta, 0.25 * out.delta_star,
                                       std::min(delta_max,
                                                4.0 * out.delta_star)));
  best = std::max(best, golden_section_max(eg, eta, 1e-12 * delta_max,
                                           delta_max));

  out.stationary_agrees = star_valid && std::abs(best - f_star) <= 1e-9;
  out.clamped = best < 0.0;
  out.value = std::max(0.0, best);
  return out;
}

EpsilonBound eps_geo_closed_form(double eg, double eta) {
  check_eg_eta(eg, eta);
  EpsilonBound out;
  out.formula = BoundFormula::closed_form;
  out.eta_used = eta;
  out.validity_ok = eta <= kEtaValidityMax;
  const double f1 =
      1.0 - std::pow(3.0 * std::sqrt(eta) / (2.0 * eg), 2.0 / 3.0);
  const double f2 = eg - std::cbrt(18.0 * eg * eta);
  if (f1 <= 0.0 || f2 <= 0.0) {
    out.value = 0.0;
    out.clamped = true;
  } else {
    out.value = f1 * f2;
  }
  return out;
}

EpsilonBound eps_geo_star_lower(double eta) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
  EpsilonBound out;
  out.formula = BoundFormula::star_lower;
  out.eta_used = eta;
  out.validity_ok = eta <= kEtaValidityMax;
  const double raw =
      1.0 - 4.0 * std::cbrt(eta) + 3.4 * std::cbrt(eta * eta);
  out.clamped = raw < 0.0;
  out.value = std::max(0.0, raw);
  return out;
}

MassConcentrationReport check_mass_concentration(const Ensemble& rho,
                                                 const PureState& psi,
                                                 double delta_param) {
  if (delta_param <= 0.0)
    throw std::invalid_argument("delta must be > 0");
  MassConcentrationReport rep;
  rep.delta = delta_param;
  rep.measured_eta = std::max(0.0, 1.0 - fidelity(rho, psi));
  for (const auto& [p, term] : rho.terms())
    if (fidelity(term, psi) >= 1.0 - delta_param) rep.close_mass += p;
  rep.lower_bound = 1.0 - rep.measured_eta / delta_param;
  rep.holds = rep.close_mass >= rep.lower_bound - 1e-12;
  return rep;
}

LipschitzReport check_geometric_lipschitz(const PureState& a,
                                          const PureState& b,
                                          const OverlapOptions& opts) {
  LipschitzReport rep;
  rep.eta = std::max(0.0, 1.0 - fidelity(a, b));
  rep.eg_a = geometric_measure(a, opts).value;
  rep.eg_b = geometric_measure(b, opts).value;
  rep.difference = std::abs(rep.eg_a - rep.eg_b);
  rep.bound = 3.0 * std::sqrt(rep.eta);
  rep.holds = rep.difference <= rep.bound + 2e-6;
  return rep;
}

}  // namespace mbqc

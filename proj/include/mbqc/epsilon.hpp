#pragma once

#include <string>

#include "mbqc/monotones.hpp"
#include "mbqc/qstate.hpp"

namespace mbqc {

/// Fidelity-loss budget eta(eps) for the trace distance: the tightest affine
/// choice eta = eps, valid whenever the reference state is pure
/// (1 - <psi|rho|psi> <= D_tr(rho, |psi>)).
double eta_for_trace(double eps);

enum class DistanceKind { trace };

std::string to_string(DistanceKind kind);

/// Distance-to-fidelity link: a strictly increasing eta(eps) with
/// eta(0) = 0, declared valid on [0, max_eps].
struct EtaMap {
  DistanceKind kind = DistanceKind::trace;
  double max_eps = 1.0;

  double operator()(double eps) const;
};

EtaMap eta_map(DistanceKind kind);

/// Approximate regime boundary for the closed-form and star bounds.
inline constexpr double kEtaValidityMax = 0.44;

enum class BoundFormula { variational, closed_form, star_lower };

std::string to_string(BoundFormula f);

/// Lower bound on a guaranteed (epsilon-ball minimum) geometric measure.
struct EpsilonBound {
  double value = 0.0;
  double eta_used = 0.0;
  /// False once eta exceeds the ~0.44 regime boundary (flag, not an error).
  bool validity_ok = true;
  BoundFormula formula = BoundFormula::variational;
  /// True when a negative raw bound was clamped to zero.
  bool clamped = false;
  /// Variational only: stationary-point value agreed with the grid maximum
  /// within 1e-9. When false the grid/refined value wins.
  bool stationary_agrees = true;
  /// Variational only: the stationary candidate ((2/3) Eg eta)^(2/3).
  double delta_star = 0.0;
};

/// max over Delta > 0 of (1 - eta/Delta) (Eg - 3 sqrt(Delta)), evaluated at
/// the stationary candidate, on a 400-point log grid over [1e-12, 1], and
/// refined by golden-section search; the best value wins.
EpsilonBound eps_geo_variational(double eg, double eta);

/// [1 - (3 sqrt(eta) / (2 Eg))^(2/3)] [Eg - (18 Eg eta)^(1/3)], which is the
/// variational objective at its stationary candidate; zero once either
/// factor turns negative.
EpsilonBound eps_geo_closed_form(double eg, double eta);

/// 1 - 4 eta^(1/3) + 3.4 eta^(2/3), clamped at zero. Lower-bounds the
/// all-states supremum of the guaranteed geometric measure.
EpsilonBound eps_geo_star_lower(double eta);

// ---------------------------------------------------------------------------
// Executable checks of the two pure/mixed continuity facts the bounds rest on

/// For rho with <psi|rho|psi> = 1 - eta, the probability mass of
/// decomposition terms with |<psi_i|psi>|^2 >= 1 - Delta is >= 1 - eta/Delta.
struct MassConcentrationReport {
  double measured_eta = 0.0;
  double delta = 0.0;
  double close_mass = 0.0;
  double lower_bound = 0.0;
  bool holds = false;
};

MassConcentrationReport check_mass_concentration(const Ensemble& rho,
                                                 const PureState& psi,
                                                 double delta_param);

/// |E_G(psi) - E_G(psi~)| <= 3 sqrt(1 - |<psi|psi~>|^2), with measure values
/// from the alternating optimizer.
struct LipschitzReport {
  double eta = 0.0;
  double eg_a = 0.0;
  double eg_b = 0.0;
  double difference = 0.0;
  double bound = 0.0;
  bool holds = false;
};

LipschitzReport check_geometric_lipschitz(const PureState& a,
                                          const PureState& b,
                                          const OverlapOptions& opts = {});

}  // namespace mbqc

// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit code 0 iff every criterion passes within its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mbqc/criteria.hpp"
#include "mbqc/epsilon.hpp"
#include "mbqc/locc.hpp"
#include "mbqc/monotones.hpp"
#include "mbqc/percolation.hpp"
#include "mbqc/qstate.hpp"

using namespace mbqc;

namespace {

struct Criterion {
  std::string name;
  double time_budget_s;
  std::function<bool(std::string&)> body;
};

bool check(bool condition, const std::string& what, std::string& detail) {
  if (!condition && detail.empty()) detail = "failed: " + what;
  return condition;
}

// C1 ------------------------------------------------------------------------
bool c1_w_overlap(std::string& detail) {
  bool ok = true;
  double prev = 1.0 + 1e-9;
  double last = 0.0;
  for (int n = 2; n <= 12; ++n) {
    OverlapOptions opts;
    opts.tol = 1e-12;
    const double value = product_overlap(make_w_state(n), opts).value;
    const double expected = std::pow(1.0 - 1.0 / n, n - 1);
    ok &= check(std::abs(value - expected) <= 1e-6,
                "overlap(W_" + std::to_string(n) + ") within 1e-6", detail);
    ok &= check(value < prev, "sequence strictly decreasing", detail);
    prev = value;
    last = value;
  }
  ok &= check(last > 1.0 / std::exp(1.0), "W_12 value above 1/e", detail);
  if (ok) {
    std::ostringstream oss;
    oss << "overlap(W_12) = " << last;
    detail = oss.str();
  }
  return ok;
}

// C2 ------------------------------------------------------------------------
bool c2_w_threshold(std::string& detail) {
  const double eta = w_threshold_eta();
  const double residual =
      std::abs(eps_geo_star_lower(eta).value - (1.0 - 1.0 / std::exp(1.0)));
  bool ok = true;
  ok &= check(eta >= 9.5e-4 && eta <= 1.1e-3, "threshold in [9.5e-4, 1.1e-3]",
              detail);
  ok &= check(residual < 1e-9, "bisection residual < 1e-9", detail);
  if (ok) {
    std::ostringstream oss;
    oss << "eta = " << eta << ", residual = " << residual;
    detail = oss.str();
  }
  return ok;
}

// C3 ------------------------------------------------------------------------
bool c3_star_bound(std::string& detail) {
  const double target = 1.0 - 1.0 / std::exp(1.0);
  const double at_1em3 = eps_geo_star_lower(1e-3).value;
  const double at_11em4 = eps_geo_star_lower(1.1e-3).value;
  bool ok = true;
  // The quoted formula gives exactly 0.634 at eta = 1e-3.
  ok &= check(std::abs(at_1em3 - 0.634) <= 1e-5, "value at 1e-3", detail);
  ok &= check(at_1em3 > target, "bound above 1 - 1/e at 1e-3", detail);
  ok &= check(at_11em4 < target, "bound below 1 - 1/e at 1.1e-3", detail);
  if (ok) {
    std::ostringstream oss;
    oss << "bound(1e-3) = " << at_1em3 << ", bound(1.1e-3) = " << at_11em4;
    detail = oss.str();
  }
  return ok;
}

// C4 ------------------------------------------------------------------------
bool c4_percolation_threshold(std::string& detail) {
  const double pc = estimate_threshold(64, 2000, 20250712);
  const bool ok = check(std::abs(pc - 0.5927) <= 0.01,
                        "threshold within 0.5927 +- 0.01", detail);
  if (ok) {
    std::ostringstream oss;
    oss << "p_c(L=64) = " << pc;
    detail = oss.str();
  }
  return ok;
}

// C5 ------------------------------------------------------------------------
bool c5_deformed_constants(std::string& detail) {
  bool ok = true;
  ok &= check(std::abs(deformed_threshold(0.5927) - 0.6490) <= 5e-4,
              "lambda_c within 5e-4", detail);
  ok &= check(std::abs(deformed_p_site(0.6490) - 0.5927) <= 5e-4,
              "p_site within 5e-4", detail);
  const int side = 64, samples = 100;
  for (double lambda : {0.5, 0.6490, 0.8}) {
    const double p = deformed_p_site(lambda);
    double total = 0.0;
    for (int t = 0; t < samples; ++t) {
      SplitMix64 rng = SplitMix64::stream(555, t);
      total += povm_hole_sampler(lambda, side, rng).occupied_fraction();
    }
    const double mean = total / samples;
    const double sigma =
        std::sqrt(p * (1.0 - p) / (static_cast<double>(samples) * side * side));
    std::ostringstream what;
    what << "occupancy within 4 sigma at lambda = " << lambda;
    ok &= check(std::abs(mean - p) <= 4.0 * sigma, what.str(), detail);
  }
  if (ok) detail = "filter constants and occupancy statistics agree";
  return ok;
}

// C6 / C7 --------------------------------------------------------------------
struct NoisyRun {
  NoisyClusterReport report;
  double p;
};

std::vector<NoisyRun> noisy_runs() {
  std::vector<NoisyRun> runs;
  for (double p : {0.05, 0.2}) {
    for (int n = 4; n <= 6; ++n) {
      std::vector<double> angles(n - 1, 0.0);
      for (int i = 1; i < n - 1; ++i) angles[i] = 0.3 + 0.4 * i;
      const RotationProtocol proto = chain_rotation_protocol(n, angles);
      for (int flip : {2, n - 1})
        runs.push_back({noisy_cluster_experiment(Graph::path(n), flip, p,
                                                 proto.protocol),
                        p});
    }
    const RotationProtocol grid = grid2x2_protocol(0.7, -0.4);
    for (int flip : {0, 1})
      runs.push_back({noisy_cluster_experiment(Graph::grid(2, 2), flip, p,
                                               grid.protocol),
                      p});
  }
  return runs;
}

bool c6_noisy_cluster(std::string& detail) {
  bool ok = true;
  double worst_distance_slack = 1.0, worst_prob = 0.0;
  for (const NoisyRun& run : noisy_runs()) {
    ok &= check(run.report.max_branch_distance <= run.p + 1e-9,
                "branch distance <= p + 1e-9", detail);
    ok &= check(run.report.max_probability_deviation <= 1e-12,
                "branch probabilities uniform within 1e-12", detail);
    worst_distance_slack = std::min(
        worst_distance_slack, run.p - run.report.max_branch_distance);
    worst_prob =
        std::max(worst_prob, run.report.max_probability_deviation);
  }
  if (ok) {
    std::ostringstream oss;
    oss << "worst distance slack = " << worst_distance_slack
        << ", worst probability deviation = " << worst_prob;
    detail = oss.str();
  }
  return ok;
}

bool c7_observation_bound(std::string& detail) {
  bool ok = true;
  double worst = 1.0;
  for (const NoisyRun& run : noisy_runs()) {
    const double threshold = (1.0 - run.p) * (1.0 - 0.0) - 1e-9;
    ok &= check(run.report.averaged_fidelity >= threshold,
                "averaged fidelity >= (1-p)(1-0) - 1e-9", detail);
    worst = std::min(worst, run.report.averaged_fidelity - threshold);
  }
  if (ok) {
    std::ostringstream oss;
    oss << "smallest fidelity margin = " << worst;
    detail = oss.str();
  }
  return ok;
}

// C8 ------------------------------------------------------------------------
bool c8_stability(std::string& detail) {
  const PureState cluster = make_graph_state(Graph::path(4));
  const Ensemble base = Ensemble::pure(cluster);
  const RotationProtocol proto =
      chain_rotation_protocol(4, std::array<double, 3>{0.0, 0.7, 1.1});
  bool ok = true;
  int runs = 0;
  for (double mu : {0.02, 0.05, 0.1}) {
    for (int t = 0; t < 50; ++t) {
      SplitMix64 rng = SplitMix64::stream(777 + static_cast<int>(mu * 1000), t);
      const PureState junk = random_state(4, rng);
      const double full =
          trace_distance(Ensemble({{0.0, cluster}, {1.0, junk}}), base);
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 60; ++i) {
        const double q = 0.5 * (lo + hi);
        (q * full < mu ? lo : hi) = q;
      }
      const Ensemble perturbed(
          {{1.0 - 0.5 * (lo + hi), cluster}, {0.5 * (lo + hi), junk}});
      const StabilityReport rep = stability_experiment(
          base, perturbed, proto.protocol, proto.target, 0.0, 0.0);
      ++runs;
      ok &= check(rep.output_distance <= rep.mu + 1e-9,
                  "output distance <= mu + eps + delta", detail);
      for (const FrontierPoint& p : rep.frontier)
        ok &= check(p.delta_prime * p.eps_prime >= rep.mu - 1e-12,
                    "frontier satisfies delta' eps' >= eps + delta + mu",
                    detail);
    }
  }
  if (ok) {
    std::ostringstream oss;
    oss << runs << " perturbed replays, zero violations";
    detail = oss.str();
  }
  return ok;
}

// C9 ------------------------------------------------------------------------
bool c9_appendix_lemmas(std::string& detail) {
  bool ok = true;
  SplitMix64 rng(909);

  // 1000 random pure pairs, n <= 4: |E_G - E_G| <= 3 sqrt(eta) + 2e-6.
  OverlapOptions opts;
  opts.restarts = 24;
  int lipschitz_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 3);
    const PureState a = random_state(n, rng);
    PureState b = a;
    if (i % 2 == 0) {
      std::vector<complexd> amps(a.amplitudes().begin(),
                                 a.amplitudes().end());
      const double scale = std::pow(10.0, rng.uniform(-3.0, -0.3));
      for (complexd& x : amps)
        x += scale * complexd(rng.gaussian(), rng.gaussian());
      b = PureState::normalized(n, std::move(amps));
    } else {
      b = random_state(n, rng);
    }
    const double eta = std::max(0.0, 1.0 - fidelity(a, b));
    const double diff = std::abs(geometric_measure(a, opts).value -
                                 geometric_measure(b, opts).value);
    if (diff > 3.0 * std::sqrt(eta) + 2e-6) ++lipschitz_violations;
  }
  ok &= check(lipschitz_violations == 0, "continuity bound on 1000 pairs",
              detail);

  // 1000 random ensembles: mass concentration never violated.
  int mass_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 3);
    const PureState target = random_state(n, rng);
    std::vector<Ensemble::Term> terms;
    const int k = 2 + static_cast<int>(rng.next() % 3);
    std::vector<double> ws;
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      ws.push_back(rng.uniform() + 0.02);
      total += ws.back();
    }
    for (int j = 0; j < k; ++j) {
      if (j % 2 == 0) {
        std::vector<complexd> amps(target.amplitudes().begin(),
                                   target.amplitudes().end());
        for (complexd& a : amps)
          a += rng.uniform(0.05, 0.5) *
               complexd(rng.gaussian(), rng.gaussian());
        terms.emplace_back(ws[j] / total,
                           PureState::normalized(n, std::move(amps)));
      } else {
        terms.emplace_back(ws[j] / total, random_state(n, rng));
      }
    }
    const MassConcentrationReport rep = check_mass_concentration(
        Ensemble(std::move(terms)), target, rng.uniform(0.05, 0.95));
    if (!rep.holds) ++mass_violations;
  }
  ok &= check(mass_violations == 0, "mass concentration on 1000 ensembles",
              detail);

  // Bound dominance on a 50 x 50 grid.
  int dominance_violations = 0;
  for (int i = 1; i <= 50; ++i)
    for (int j = 1; j <= 50; ++j) {
      const double eg = i / 50.0;
      const double eta = 0.44 * j / 50.0;
      const double variational = eps_geo_variational(eg, eta).value;
      const double closed = eps_geo_closed_form(eg, eta).value;
      if (variational < closed - 1e-12 || closed < 0.0)
        ++dominance_violations;
    }
  ok &= check(dominance_violations == 0,
              "variational >= closed form >= 0 on the 50x50 grid", detail);

  if (ok) detail = "zero violations in all three batches";
  return ok;
}

// C10 -----------------------------------------------------------------------
bool c10_monotone_axioms(std::string& detail) {
  bool ok = true;
  SplitMix64 rng(1011);

  // P1: vanishing on product states.
  for (int i = 0; i < 20; ++i) {
    const auto f0 = random_qubit(rng);
    PureState psi(1, {f0[0], f0[1]});
    const int n = 3 + static_cast<int>(rng.next() % 2);
    for (int q = 1; q < n; ++q) {
      const auto f = random_qubit(rng);
      psi = tensor(psi, PureState(1, {f[0], f[1]}));
    }
    ok &= check(geometric_measure(psi).value <= 1e-7,
                "P1: E_G(product) = 0", detail);
  }

  // P5: appending |0> changes nothing.
  for (int i = 0; i < 10; ++i) {
    const PureState psi = random_state(3, rng);
    const double eg = geometric_measure(psi).value;
    const double eg_ext =
        geometric_measure(extend_with_zero_qubits(psi, 1)).value;
    ok &= check(std::abs(eg - eg_ext) <= 1e-6, "P5 for the geometric measure",
                detail);
  }
  ok &= check(
      schmidt_rank_width(extend_with_zero_qubits(make_ghz(5), 1)).value ==
          schmidt_rank_width(make_ghz(5)).value,
      "P5 for the rank width", detail);

  // Local-unitary invariance.
  for (int i = 0; i < 12; ++i) {
    const int n = 3 + static_cast<int>(rng.next() % 3);
    const PureState psi = random_state(n, rng);
    PureState rotated = psi;
    for (int q = 0; q < n; ++q) {
      const auto u = random_unitary2(rng);
      rotated = apply_one_qubit(rotated, q, u[0], u[1], u[2], u[3]);
    }
    ok &= check(std::abs(geometric_measure(psi).value -
                         geometric_measure(rotated).value) < 1e-6,
                "local-unitary invariance", detail);
  }

  // P4 sampling: single-qubit projective measurements never raise the
  // average geometric measure.
  int p4_violations = 0;
  for (int i = 0; i < 150; ++i) {
    const int n = 3 + static_cast<int>(rng.next() % 2);
    const PureState psi = random_state(n, rng);
    Protocol p;
    MeasureStep st;
    st.qubit = static_cast<int>(rng.next() % n);
    st.theta = rng.uniform(0.0, 3.14159265358979);
    st.phi = rng.uniform(0.0, 6.28318530717958);
    p.steps = {st};
    for (int q = 0; q < n; ++q)
      if (q != st.qubit) p.outputs.push_back(q);
    const BranchTree tree = run_protocol(psi, p);
    double average = 0.0;
    for (const BranchLeaf& leaf : tree.leaves)
      average += leaf.probability *
                 geometric_measure(leaf.residual->terms().front().second)
                     .value;
    if (average > geometric_measure(psi).value + 2e-6) ++p4_violations;
  }
  ok &= check(p4_violations == 0, "P4 sampling", detail);

  // chi-width dominates the entropic width on every tested state.
  for (int i = 0; i < 10; ++i) {
    const PureState psi = random_state(4, rng);
    ok &= check(schmidt_rank_width(psi).value >=
                    entropic_entanglement_width(psi).value - 1e-9,
                "chi-width >= entropic width", detail);
  }
  for (const PureState& psi :
       {make_ghz(5), make_w_state(5), make_graph_state(Graph::path(6))})
    ok &= check(schmidt_rank_width(psi).value >=
                    entropic_entanglement_width(psi).value - 1e-9,
                "chi-width >= entropic width (named states)", detail);

  // Tree counts (2n-5)!! for n = 3..8.
  for (int n = 3; n <= 8; ++n) {
    std::size_t count = 0;
    for_each_subcubic_tree(n, [&](const SubcubicTree&) {
      ++count;
      return true;
    });
    ok &= check(count == static_cast<std::size_t>(
                             double_factorial_odd(2 * n - 5)),
                "tree count at n = " + std::to_string(n), detail);
  }

  // GHZ chi-width equals 2 for n = 4..8.
  for (int n = 4; n <= 8; ++n)
    ok &= check(schmidt_rank_width(make_ghz(n)).value == 2.0,
                "GHZ_" + std::to_string(n) + " chi-width", detail);

  if (ok) detail = "all axiom samples clean";
  return ok;
}

// C11 -----------------------------------------------------------------------
bool c11_criteria_engine(std::string& detail) {
  bool ok = true;
  ok &= check(check_unbounded_measure(builtin_family("ghz"),
                                      MeasureId::chi_width, 0.5)
                      .decision == Decision::ruled_out,
              "GHZ ruled out under chi-width", detail);
  ok &= check(check_unbounded_measure(builtin_family("cluster1d"),
                                      MeasureId::chi_width, 0.5)
                      .decision == Decision::ruled_out,
              "1D cluster ruled out under chi-width", detail);
  ok &= check(check_unbounded_measure(builtin_family("cluster2d"),
                                      MeasureId::chi_width, 0.5)
                      .decision == Decision::not_ruled_out,
              "2D cluster not ruled out", detail);
  for (double eta : {1e-4, 1e-3, 5e-3, 0.05, 0.2, 0.44}) {
    const Verdict det =
        check_approx_det(builtin_family("w"), eta, MeasureId::geometric);
    const Verdict stoch =
        check_approx_stoch(builtin_family("w"), eta, 0.0,
                           MeasureId::geometric);
    ok &= check(det.required_value == stoch.required_value,
                "det and stoch(0) agree to the last bit", detail);
    ok &= check(det.decision == stoch.decision, "decisions agree", detail);
  }
  if (ok) detail = "verdicts as required";
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1 W-state overlap closed form (N = 2..12)", 30.0, c1_w_overlap},
      {"C2 W non-universality threshold", 1.0, c2_w_threshold},
      {"C3 star bound arithmetic and verdict flip", 1.0, c3_star_bound},
      {"C4 percolation threshold at L = 64", 180.0, c4_percolation_threshold},
      {"C5 deformed-cluster constants and filter occupancy", 30.0,
       c5_deformed_constants},
      {"C6 noisy-cluster branch distances and uniform law", 120.0,
       c6_noisy_cluster},
      {"C7 averaged-fidelity observation bound", 120.0, c7_observation_bound},
      {"C8 stability under resource perturbation", 180.0, c8_stability},
      {"C9 continuity and mass-concentration batches", 300.0,
       c9_appendix_lemmas},
      {"C10 monotone axioms and width facts", 300.0, c10_monotone_axioms},
      {"C11 criteria engine verdicts", 1.0, c11_criteria_engine},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (seconds > c.time_budget_s) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("[%s] %s (%.2fs) %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                seconds, detail.c_str());
    if (!ok) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}

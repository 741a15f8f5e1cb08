#include "mbqc/locc.hpp"

#include <algorithm>
#include <cmath>

namespace mbqc {

std::array<complexd, 2> MeasureStep::basis_vector(int outcome) const {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const complexd e(std::cos(phi), std::sin(phi));
  if (outcome == 0) return {complexd(c, 0.0), e * s};
  return {complexd(s, 0.0), -e * c};
}

void Protocol::validate(int num_qubits) const {
  std::vector<char> measured(num_qubits, 0);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const MeasureStep& st = steps[k];
    if (st.qubit < 0 || st.qubit >= num_qubits)
      throw std::invalid_argument("step qubit out of range");
    if (measured[st.qubit])
      throw std::invalid_argument("qubit measured more than once");
    measured[st.qubit] = 1;
    for (const auto& [bits, p] : st.feedforward) {
      if (bits.size() != k)
        throw std::invalid_argument(
            "feedforward key must cover exactly the earlier outcomes");
      for (char c : bits)
        if (c != '0' && c != '1')
          throw std::invalid_argument("feedforward key must be a bitstring");
    }
  }
  std::vector<int> unmeasured;
  for (int q = 0; q < num_qubits; ++q)
    if (!measured[q]) unmeasured.push_back(q);
  if (outputs != unmeasured)
    throw std::invalid_argument(
        "outputs must list the unmeasured qubits in ascending order");
  for (const auto& [bits, paulis] : frame) {
    if (bits.size() != steps.size())
      throw std::invalid_argument("frame key must cover all outcomes");
    if (paulis.size() != outputs.size())
      throw std::invalid_argument("frame needs one Pauli per output qubit");
    for (char c : paulis) pauli_from_char(c);
  }
}

nlohmann::json protocol_to_json(const Protocol& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const MeasureStep& st : p.steps) {
    nlohmann::json j{{"qubit", st.qubit}, {"theta", st.theta},
                     {"phi", st.phi}};
    if (!st.feedforward.empty()) {
      nlohmann::json ff = nlohmann::json::object();
      for (const auto& [bits, pl] : st.feedforward)
        ff[bits] = std::string(1, pauli_to_char(pl));
      j["ff"] = std::move(ff);
    }
    steps.push_back(std::move(j));
  }
  nlohmann::json out{{"steps", std::move(steps)}, {"outputs", p.outputs}};
  if (!p.frame.empty()) out["frame"] = p.frame;
  return out;
}

Protocol protocol_from_json(const nlohmann::json& j) {
  Protocol p;
  for (const nlohmann::json& js : j.at("steps")) {
    MeasureStep st;
    st.qubit = js.at("qubit").get<int>();
    st.theta = js.at("theta").get<double>();
    st.phi = js.at("phi").get<double>();
    if (js.contains("ff"))
      for (const auto& [bits, pl] : js.at("ff").items()) {
        const std::string s = pl.get<std::string>();
        if (s.size() != 1)
          throw std::invalid_argument("feedforward Pauli must be one char");
        st.feedforward[bits] = pauli_from_char(s[0]);
      }
    p.steps.push_back(std::move(st));
  }
  p.outputs = j.at("outputs").get<std::vector<int>>();
  if (j.contains("frame"))
    p.frame = j.at("frame").get<std::map<std::string, std::string>>();
  return p;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

constexpr double kPruneThreshold = 1e-14;

struct TermVec {
  double weight = 0.0;               // ensemble probability, fixed
  std::vector<complexd> amps;        // unnormalized running residual
};

void apply_pauli_raw(std::vector<complexd>& amps, int n, int pos, Pauli p) {
  if (p == Pauli::I) return;
  const std::size_t mask = std::size_t{1} << (n - 1 - pos);
  switch (p) {
    case Pauli::X:
      for (std::size_t x = 0; x < amps.size(); ++x)
        if (!(x & mask)) std::swap(amps[x], amps[x | mask]);
      break;
    case Pauli::Y:
      for (std::size_t x = 0; x < amps.size(); ++x)
        if (!(x & mask)) {
          const complexd a0 = amps[x];
          amps[x] = complexd(0, -1) * amps[x | mask];
          amps[x | mask] = complexd(0, 1) * a0;
        }
      break;
    case Pauli::Z:
      for (std::size_t x = 0; x < amps.size(); ++x)
        if (x & mask) amps[x] = -amps[x];
      break;
    default:
      break;
  }
}

double mass_of(const std::vector<TermVec>& terms) {
  double m = 0.0;
  for (const TermVec& t : terms) {
    double s = 0.0;
    for (const complexd& a : t.amps) s += std::norm(a);
    m += t.weight * s;
  }
  return m;
}

}  // namespace

Ensemble BranchTree::merged() const {
  std::vector<Ensemble::Term> terms;
  double total = 0.0;
  for (const BranchLeaf& leaf : leaves) {
    if (!leaf.residual)
      throw std::invalid_argument(
          "cannot merge a tree whose branches have no residual state");
    for (const auto& [q, psi] : leaf.residual->terms()) {
      terms.emplace_back(leaf.probability * q, psi);
      total += leaf.probability * q;
    }
  }
  for (auto& t : terms) t.first /= total;
  return Ensemble(std::move(terms));
}

BranchTree run_protocol(const Ensemble& state, const Protocol& protocol,
                        std::size_t branch_cap) {
  const int n = state.num_qubits();
  protocol.validate(n);
  const std::size_t num_steps = protocol.steps.size();
  if (num_steps >= 63 || (std::size_t{1} << num_steps) > branch_cap)
    throw capacity_error("branch count 2^steps exceeds the cap");

  BranchTree tree;
  const int n_out = n - static_cast<int>(num_steps);

  std::vector<TermVec> init;
  init.reserve(state.size());
  for (const auto& [p, psi] : state.terms())
    init.push_back({p, std::vector<complexd>(psi.amplitudes().begin(),
                                             psi.amplitudes().end())});
  std::vector<int> live(n);
  for (int q = 0; q < n; ++q) live[q] = q;

  std::string bits;
  auto dfs = [&](auto&& self, const std::vector<TermVec>& terms,
                 const std::vector<int>& live_qubits,
                 std::size_t step_idx) -> void {
    if (step_idx == num_steps) {
      const double prob = mass_of(terms);
      if (prob < kPruneThreshold) {
        ++tree.pruned;
        return;
      }
      if (n_out == 0) {
        tree.leaves.push_back({bits, prob, std::nullopt});
        tree.probability_sum += prob;
        return;
      }
      std::vector<Ensemble::Term> residual;
      std::string frame_paulis;
      if (auto it = protocol.frame.find(bits); it != protocol.frame.end())
        frame_paulis = it->second;
      double retained = 0.0;
      for (const TermVec& t : terms) {
        double s = 0.0;
        for (const complexd& a : t.amps) s += std::norm(a);
        const double w = t.weight * s;
        if (w / prob <= 1e-15) continue;
        std::vector<complexd> amps = t.amps;
        const double inv = 1.0 / std::sqrt(s);
        for (complexd& a : amps) a *= inv;
        for (std::size_t i = 0; i < frame_paulis.size(); ++i)
          apply_pauli_raw(amps, n_out, static_cast<int>(i),
                          pauli_from_char(frame_paulis[i]));
        residual.emplace_back(w, PureState(n_out, std::move(amps)));
        retained += w;
      }
      for (auto& term : residual) term.first /= retained;
      tree.leaves.push_back({bits, prob, Ensemble(std::move(residual))});
      tree.probability_sum += prob;
      return;
    }

    const MeasureStep& st = protocol.steps[step_idx];
    const int pos = static_cast<int>(
        std::find(live_qubits.begin(), live_qubits.end(), st.qubit) -
        live_qubits.begin());
    const int n_cur = static_cast<int>(live_qubits.size());

    std::vector<TermVec> corrected = terms;
    if (auto it = st.feedforward.find(bits); it != st.feedforward.end())
      for (TermVec& t : corrected) apply_pauli_raw(t.amps, n_cur, pos, it->second);

    std::vector<int> next_live = live_qubits;
    next_live.erase(next_live.begin() + pos);

    for (int outcome = 0; outcome < 2; ++outcome) {
      const std::array<complexd, 2> bra = st.basis_vector(outcome);
      std::vector<TermVec> child;
      child.reserve(corrected.size());
      for (const TermVec& t : corrected)
        child.push_back({t.weight, contract_qubit(t.amps, n_cur, pos, bra)});
      bits.push_back(outcome ? '1' : '0');
      if (mass_of(child) < kPruneThreshold) {
        ++tree.pruned;
      } else {
        self(self, child, next_live, step_idx + 1);
      }
      bits.pop_back();
    }
  };
  dfs(dfs, init, live, 0);
  return tree;
}

BranchTree run_protocol(const PureState& state, const Protocol& protocol,
                        std::size_t branch_cap) {
  return run_protocol(Ensemble::pure(state), protocol, branch_cap);
}

std::map<std::string, std::string> solve_pauli_frame(const BranchTree& tree) {
  if (tree.leaves.empty()) throw std::invalid_argument("empty branch tree");
  if (!tree.leaves.front().residual)
    throw std::invalid_argument("tree has no residual states");
  const Ensemble& ref_ens = *tree.leaves.front().residual;
  if (ref_ens.size() != 1)
    throw std::invalid_argument("reference branch is not pure");
  const PureState& ref = ref_ens.terms().front().second;
  const int n_out = ref.num_qubits();
  if (n_out > 8) throw capacity_error("frame search capped at 8 outputs");

  const std::array<Pauli, 4> alphabet{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  std::map<std::string, std::string> frame;
  for (const BranchLeaf& leaf : tree.leaves) {
    if (!leaf.residual || leaf.residual->size() != 1)
      throw std::invalid_argument("branch " + leaf.bits + " is not pure");
    const PureState& psi = leaf.residual->terms().front().second;
    bool found = false;
    const std::size_t count = std::size_t{1} << (2 * n_out);
    for (std::size_t code = 0; code < count && !found; ++code) {
      PureState corrected = psi;
      std::string chars(n_out, 'I');
      for (int q = 0; q < n_out; ++q) {
        const Pauli p = alphabet[(code >> (2 * q)) & 3];
        chars[q] = pauli_to_char(p);
        corrected = apply_pauli(corrected, q, p);
      }
      if (fidelity(corrected, ref) >= 1.0 - 1e-10) {
        frame[leaf.bits] = chars;
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("branch " + leaf.bits +
                                  " is not Pauli-equivalent to the first");
  }
  return frame;
}

// ---------------------------------------------------------------------------
// Protocol builders

namespace {

char correction_char(bool x, bool z) {
  if (x && z) return 'Y';  // Z X = iY; the phase is irrelevant at read-out
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

// Byproduct recursion along the cluster wire: measuring with the sign-fixed
// angle maps the frame (x, z) to (s xor z, x).
std::pair<bool, bool> wire_frame(const std::string& bits) {
  bool x = false, z = false;
  for (char c : bits) {
    const bool s = c == '1';
    const bool nx = s != z;
    z = x;
    x = nx;
  }
  return {x, z};
}

}  // namespace

RotationProtocol chain_rotation_protocol(int n,
                                         std::span<const double> angles) {
  if (n < 2) throw std::invalid_argument("chain needs >= 2 qubits");
  if (static_cast<int>(angles.size()) != n - 1)
    throw std::invalid_argument("need one angle per measured qubit");

  Protocol p;
  for (int j = 0; j < n - 1; ++j) {
    MeasureStep st;
    st.qubit = j;
    st.theta = 1.5707963267948966;
    st.phi = angles[j];
    // X before measuring flips the equatorial angle sign, which undoes the
    // pending X byproduct for this step.
    for (std::uint64_t prior = 0; prior < (std::uint64_t{1} << j); ++prior) {
      std::string bits(j, '0');
      for (int i = 0; i < j; ++i)
        if ((prior >> i) & 1) bits[i] = '1';
      if (wire_frame(bits).first) st.feedforward[bits] = Pauli::X;
    }
    p.steps.push_back(std::move(st));
  }
  p.outputs = {n - 1};
  for (std::uint64_t full = 0; full < (std::uint64_t{1} << (n - 1)); ++full) {
    std::string bits(n - 1, '0');
    for (int i = 0; i < n - 1; ++i)
      if ((full >> i) & 1) bits[i] = '1';
    const auto [x, z] = wire_frame(bits);
    p.frame[bits] = std::string(1, correction_char(x, z));
  }

  // Target: the zero-outcome branch operator product H P(-phi_j) applied to
  // |+>, composed step by step.
  complexd u00{1, 0}, u01{0, 0}, u10{0, 0}, u11{1, 0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n - 1; ++j) {
    const complexd e(std::cos(-angles[j]), std::sin(-angles[j]));
    // W = H P(-phi): rows of H times the diagonal (1, e).
    const complexd w00 = inv_sqrt2, w01 = inv_sqrt2 * e;
    const complexd w10 = inv_sqrt2, w11 = -inv_sqrt2 * e;
    const complexd n00 = w00 * u00 + w01 * u10;
    const complexd n01 = w00 * u01 + w01 * u11;
    const complexd n10 = w10 * u00 + w11 * u10;
    const complexd n11 = w10 * u01 + w11 * u11;
    u00 = n00;
    u01 = n01;
    u10 = n10;
    u11 = n11;
  }
  PureState target = PureState::normalized(
      1, {(u00 + u01) * inv_sqrt2, (u10 + u11) * inv_sqrt2});
  return {std::move(p), std::move(target)};
}

RotationProtocol one_way_rotation(double xi, double eta, double zeta) {
  const std::array<double, 4> angles{0.0, xi, eta, zeta};
  return chain_rotation_protocol(5, angles);
}

RotationProtocol grid2x2_protocol(double alpha, double beta) {
  Protocol p;
  MeasureStep a;
  a.qubit = 0;
  a.phi = alpha;
  MeasureStep b;
  b.qubit = 2;
  b.phi = beta;
  p.steps = {a, b};
  p.outputs = {1, 3};

  // The two byproducts commute with both measurements (they only touch the
  // outputs), so the frame can be solved from a frameless clean run.
  const PureState cluster = make_graph_state(Graph::grid(2, 2));
  BranchTree raw = run_protocol(cluster, p);
  p.frame = solve_pauli_frame(raw);

  BranchTree corrected = run_protocol(cluster, p);
  PureState target =
      corrected.leaves.front().residual->terms().front().second;
  return {std::move(p), std::move(target)};
}

// ---------------------------------------------------------------------------
// Experiments

NoisyClusterReport noisy_cluster_experiment(const Graph& g,
                                            std::span<const ZPattern> noise,
                                            double p,
                                            const Protocol& protocol) {
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("noise weight p must lie in [0, 1)");
  double pattern_total = 0.0;
  for (const ZPattern& zp : noise) pattern_total += zp.weight;
  if (!noise.empty() && std::abs(pattern_total - 1.0) > 1e-12)
    throw std::invalid_argument("noise pattern weights must sum to 1");

  const PureState clean = make_graph_state(g);
  const BranchTree clean_tree = run_protocol(clean, protocol);
  if (clean_tree.leaves.empty())
    throw std::invalid_argument("protocol produced no branches");
  if (!clean_tree.leaves.front().residual)
    throw std::invalid_argument("protocol leaves no output qubits");
  const Ensemble& first = *clean_tree.leaves.front().residual;
  if (first.size() != 1)
    throw std::invalid_argument("protocol is not deterministic on the clean "
                                "resource (mixed branch)");
  const PureState target = first.terms().front().second;
  for (const BranchLeaf& leaf : clean_tree.leaves)
    if (!leaf.residual || leaf.residual->size() != 1 ||
        fidelity(leaf.residual->terms().front().second, target) < 1.0 - 1e-10)
      throw std::invalid_argument(
          "protocol is not deterministic on the clean resource");

  // Resource: (1-p) |C><C| + p sum_k lambda_k |C^k><C^k|.
  std::vector<Ensemble::Term> terms;
  std::vector<PureState> flipped;
  if (p == 0.0 || noise.empty()) {
    terms.emplace_back(1.0, clean);
  } else {
    terms.emplace_back(1.0 - p, clean);
    for (const ZPattern& zp : noise) {
      PureState state = clean;
      for (int q = 0; q < g.num_vertices(); ++q)
        if ((zp.mask >> q) & 1) state = apply_pauli(state, q, Pauli::Z);
      flipped.push_back(state);
      terms.emplace_back(p * zp.weight, std::move(state));
    }
  }
  const Ensemble sigma{std::move(terms)};
  const BranchTree tree = run_protocol(sigma, protocol);

  NoisyClusterReport rep;
  rep.p = p;
  rep.measured_qubits = static_cast<int>(protocol.steps.size());
  rep.branches = static_cast<int>(tree.leaves.size());
  rep.distance_bound = p;
  const double uniform = std::pow(2.0, -rep.measured_qubits);
  for (const BranchLeaf& leaf : tree.leaves) {
    rep.max_branch_distance = std::max(
        rep.max_branch_distance, trace_distance(*leaf.residual, target));
    rep.max_probability_deviation = std::max(
        rep.max_probability_deviation, std::abs(leaf.probability - uniform));
  }
  // Each noise component must reproduce the branch statistics on its own.
  for (const PureState& comp : flipped) {
    const BranchTree t = run_protocol(comp, protocol);
    for (const BranchLeaf& leaf : t.leaves)
      rep.max_probability_deviation = std::max(
          rep.max_probability_deviation, std::abs(leaf.probability - uniform));
  }
  rep.averaged_fidelity = fidelity(tree.merged(), target);
  rep.distances_ok = rep.max_branch_distance <= p + 1e-9;
  rep.probabilities_ok = rep.max_probability_deviation <= 1e-12;
  return rep;
}

NoisyClusterReport noisy_cluster_experiment(const Graph& g, int flip_qubit,
                                            double p,
                                            const Protocol& protocol) {
  if (flip_qubit < 0 || flip_qubit >= g.num_vertices())
    throw std::invalid_argument("flip qubit out of range");
  const ZPattern zp{1.0, std::uint64_t{1} << flip_qubit};
  return noisy_cluster_experiment(g, std::span<const ZPattern>(&zp, 1), p,
                                  protocol);
}

FidelityCheckReport averaged_fidelity_check(const BranchTree& tree,
                                            const PureState& target,
                                            double eps, double delta) {
  FidelityCheckReport rep;
  rep.fidelity = fidelity(tree.merged(), target);
  rep.threshold = (1.0 - eps) * (1.0 - delta);
  rep.pass = rep.fidelity >= rep.threshold - 1e-9;
  return rep;
}

StabilityReport stability_experiment(const Ensemble& base,
                                     const Ensemble& perturbed,
                                     const Protocol& protocol,
                                     const PureState& target, double eps,
                                     double delta) {
  if (eps < 0.0 || delta < 0.0 || eps + delta >= 1.0)
    throw std::invalid_argument("hypothesis violated: eps + delta < 1");
  StabilityReport rep;
  rep.eps = eps;
  rep.delta = delta;
  rep.mu = trace_distance(base, perturbed);
  if (rep.mu > 1.0 - delta - eps + 1e-12)
    throw std::invalid_argument("hypothesis violated: mu <= 1 - delta - eps");

  const BranchTree tree = run_protocol(perturbed, protocol);
  const Ensemble pooled = tree.merged();
  rep.output_distance = trace_distance(pooled, target);
  rep.distance_bound = rep.mu + eps + delta;
  rep.measured_fidelity = fidelity(pooled, target);
  rep.fidelity_bound = 1.0 - eta_for_trace(std::min(1.0, rep.distance_bound));
  rep.frontier =
      stability_frontier(eps, delta, rep.mu, DistanceKind::trace);
  rep.pass = rep.output_distance <= rep.distance_bound + 1e-9 &&
             rep.measured_fidelity >= rep.fidelity_bound - 1e-9;
  return rep;
}

}  // namespace mbqc

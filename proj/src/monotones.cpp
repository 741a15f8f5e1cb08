#include "mbqc/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace mbqc {

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::exact:
      return "exact";
    case BoundKind::lower_bound:
      return "lower_bound";
    case BoundKind::upper_bound:
      return "upper_bound";
  }
  return "?";
}

std::string to_string(MeasureId m) {
  switch (m) {
    case MeasureId::geometric:
      return "geometric";
    case MeasureId::chi_width:
      return "chi-width";
    case MeasureId::entropic_width:
      return "entropic-width";
  }
  return "?";
}

MeasureId measure_from_string(const std::string& name) {
  if (name == "geometric") return MeasureId::geometric;
  if (name == "chi-width" || name == "chi_width") return MeasureId::chi_width;
  if (name == "entropic-width" || name == "entropic_width")
    return MeasureId::entropic_width;
  throw std::invalid_argument("unknown measure: " + name);
}

int& tree_leaf_limit() {
  static int limit = 10;
  return limit;
}

double double_factorial_odd(int k) {
  double v = 1.0;
  for (int i = k; i >= 2; i -= 2) v *= i;
  return v;
}

// ---------------------------------------------------------------------------
// Subcubic trees

void SubcubicTree::validate() const {
  if (num_leaves < 2) throw std::invalid_argument("tree needs >= 2 leaves");
  const int nv = num_vertices();
  if (static_cast<int>(edges.size()) != nv - 1)
    throw std::invalid_argument("tree edge count must be V - 1");
  std::vector<int> degree(nv, 0);
  std::vector<std::vector<int>> adj(nv);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= nv || v >= nv || u == v)
      throw std::invalid_argument("bad tree edge");
    ++degree[u];
    ++degree[v];
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int v = 0; v < nv; ++v) {
    const bool is_leaf = v < num_leaves;
    const int expected = (num_leaves == 2 || is_leaf) ? 1 : 3;
    if (degree[v] != expected)
      throw std::invalid_argument("vertex degree must be 1 (leaf) or 3");
  }
  // Connectivity (acyclicity follows from the edge count).
  std::vector<char> seen(nv, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++count;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  if (count != nv) throw std::invalid_argument("tree is not connected");
}

std::vector<std::vector<int>> SubcubicTree::edge_leaf_sets() const {
  const int nv = num_vertices();
  std::vector<std::vector<int>> adj(nv);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back(static_cast<int>(i));
    adj[edges[i].second].push_back(static_cast<int>(i));
  }
  std::vector<std::vector<int>> result;
  result.reserve(edges.size());
  for (std::size_t cut = 0; cut < edges.size(); ++cut) {
    std::vector<int> side;
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{edges[cut].first};
    seen[edges[cut].first] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (v < num_leaves) side.push_back(v);
      for (int ei : adj[v]) {
        if (ei == static_cast<int>(cut)) continue;
        const auto [a, b] = edges[ei];
        const int w = (a == v) ? b : a;
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(side.begin(), side.end());
    result.push_back(std::move(side));
  }
  return result;
}

std::vector<std::uint64_t> SubcubicTree::edge_leaf_masks() const {
  const int nv = num_vertices();
  // Adjacency as (neighbor, edge index) pairs; degree <= 3.
  std::vector<std::array<std::pair<int, int>, 3>> adj(nv);
  std::vector<int> degree(nv, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    adj[u][degree[u]++] = {v, static_cast<int>(i)};
    adj[v][degree[v]++] = {u, static_cast<int>(i)};
  }
  std::vector<std::uint64_t> mask(edges.size(), 0);
  std::vector<std::uint64_t> below(nv, 0);
  // Iterative post-order from vertex 0: each edge gets the leaf set of the
  // subtree on its far side.
  std::vector<std::pair<int, int>> stack{{0, -1}};
  std::vector<std::pair<int, int>> order;
  order.reserve(nv);
  while (!stack.empty()) {
    const auto [v, parent_edge] = stack.back();
    stack.pop_back();
    order.emplace_back(v, parent_edge);
    for (int d = 0; d < degree[v]; ++d)
      if (adj[v][d].second != parent_edge)
        stack.emplace_back(adj[v][d].first, adj[v][d].second);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto [v, parent_edge] = *it;
    if (v < num_leaves) below[v] |= std::uint64_t{1} << v;
    if (parent_edge >= 0) {
      mask[parent_edge] = below[v];
      const auto [a, b] = edges[parent_edge];
      below[a == v ? b : a] |= below[v];
    }
  }
  return mask;
}

void for_each_subcubic_tree(
    int n, const std::function<bool(const SubcubicTree&)>& fn) {
  if (n < 2) throw std::invalid_argument("need at least 2 leaves");
  if (n == 2) {
    fn(SubcubicTree{2, {{0, 1}}});
    return;
  }
  SubcubicTree seed{n, {{0, n}, {1, n}, {2, n}}};

  // Insert leaf k by subdividing each edge in turn; every n-leaf tree arises
  // exactly once, giving the (2n-5)!! count without isomorphism filtering.
  bool stop = false;
  auto grow = [&](auto&& self, const SubcubicTree& tree, int next_leaf) -> void {
    if (stop) return;
    if (next_leaf == n) {
      if (!fn(tree)) stop = true;
      return;
    }
    const int w = n + (next_leaf - 2);  // next internal vertex label
    for (std::size_t i = 0; i < tree.edges.size() && !stop; ++i) {
      SubcubicTree t = tree;
      const auto [u, v] = t.edges[i];
      t.edges[i] = {u, w};
      t.edges.emplace_back(w, v);
      t.edges.emplace_back(w, next_leaf);
      self(self, t, next_leaf + 1);
    }
  };
  grow(grow, seed, 3);
}

std::vector<SubcubicTree> enumerate_subcubic_trees(int n) {
  if (n < 3) throw std::invalid_argument("enumeration needs n >= 3");
  if (n > tree_leaf_limit())
    throw capacity_error("tree enumeration capped at " +
                         std::to_string(tree_leaf_limit()) + " leaves");
  std::vector<SubcubicTree> out;
  out.reserve(static_cast<std::size_t>(double_factorial_odd(2 * n - 5)));
  for_each_subcubic_tree(n, [&](const SubcubicTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Alternating optimization for the product overlap

namespace {

using LocalStates = std::vector<std::array<complexd, 2>>;

// One ascending sweep of local-state updates; returns the squared overlap
// after the last update. Prefix tensors keep the sweep at O(2^n) cost.
double als_sweep(std::span<const complexd> psi, int n, LocalStates& phi,
                 std::vector<complexd>& prefix, std::vector<complexd>& work) {
  // prefix holds conj(psi) contracted with phi_0..phi_{q-1}; starts as
  // conj(psi) over qubits q..n-1.
  prefix.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) prefix[i] = std::conj(psi[i]);

  double overlap_sq = 0.0;
  for (int q = 0; q < n; ++q) {
    const int rem = n - q;  // qubits q..n-1 live in prefix
    // Contract trailing qubits with their current local states down to g_q.
    work.assign(prefix.begin(), prefix.begin() + (std::size_t{1} << rem));
    std::size_t len = std::size_t{1} << rem;
    for (int j = n - 1; j > q; --j) {
      const auto& f = phi[j];
      len >>= 1;
      for (std::size_t y = 0; y < len; ++y)
        work[y] = work[2 * y] * f[0] + work[2 * y + 1] * f[1];
    }
    const complexd g0 = work[0];
    const complexd g1 = work[1];
    const double norm_g = std::sqrt(std::norm(g0) + std::norm(g1));
    if (norm_g > 1e-300) {
      phi[q] = {std::conj(g0) / norm_g, std::conj(g1) / norm_g};
      overlap_sq = norm_g * norm_g;
    } else {
      overlap_sq = 0.0;
    }
    // Fold qubit q into the prefix with the updated local state.
    const std::size_t half = std::size_t{1} << (rem - 1);
    const auto& f = phi[q];
    for (std::size_t y = 0; y < half; ++y)
      prefix[y] = prefix[y] * f[0] + prefix[y + half] * f[1];
  }
  return overlap_sq;
}

double overlap_with_product(const PureState& psi, const LocalStates& phi) {
  const int n = psi.num_qubits();
  std::vector<complexd> acc(psi.dim());
  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] = std::conj(psi.amplitude(i));
  std::size_t len = psi.dim();
  for (int j = n - 1; j >= 0; --j) {
    const auto& f = phi[j];
    len >>= 1;
    for (std::size_t y = 0; y < len; ++y)
      acc[y] = acc[2 * y] * f[0] + acc[2 * y + 1] * f[1];
  }
  return std::norm(acc[0]);
}

LocalStates greedy_basis_start(const PureState& psi) {
  std::size_t best = 0;
  double best_mag = 0.0;
  for (std::size_t x = 0; x < psi.dim(); ++x) {
    const double m = std::norm(psi.amplitude(x));
    if (m > best_mag) {
      best_mag = m;
      best = x;
    }
  }
  const int n = psi.num_qubits();
  LocalStates phi(n);
  for (int q = 0; q < n; ++q) {
    const bool one = PureState::basis_bit(best, n, q);
    phi[q] = {complexd(one ? 0.0 : 1.0), complexd(one ? 1.0 : 0.0)};
  }
  return phi;
}

}  // namespace

MonotoneResult product_overlap(const PureState& psi,
                               const OverlapOptions& opts) {
  if (opts.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (opts.tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  const int n = psi.num_qubits();

  std::vector<LocalStates> starts = opts.initial_guesses;
  starts.push_back(greedy_basis_start(psi));
  for (int r = 0; r < opts.restarts; ++r) {
    SplitMix64 rng = SplitMix64::stream(opts.seed, static_cast<std::uint64_t>(r));
    LocalStates phi(n);
    for (auto& f : phi) f = random_qubit(rng);
    starts.push_back(std::move(phi));
  }

  MonotoneResult result;
  result.kind = BoundKind::lower_bound;
  result.method = "alternating optimization";
  result.restarts = static_cast<int>(starts.size());
  result.value = -1.0;

  std::vector<complexd> prefix, work;
  for (LocalStates& phi : starts) {
    if (static_cast<int>(phi.size()) != n)
      throw std::invalid_argument("initial guess has wrong qubit count");
    double prev = overlap_with_product(psi, phi);
    int sweeps = 0;
    bool converged = false;
    double cur = prev;
    while (sweeps < opts.max_sweeps) {
      cur = als_sweep(psi.amplitudes(), n, phi, prefix, work);
      ++sweeps;
      if (cur - prev < opts.tol) {
        converged = true;
        break;
      }
      prev = cur;
    }
    if (cur > result.value) {
      result.value = cur;
      result.iterations = sweeps;
      result.converged = converged;
      result.witness_product = phi;
    }
  }
  result.value = std::min(result.value, 1.0);
  return result;
}

MonotoneResult geometric_measure(const PureState& psi,
                                 const OverlapOptions& opts) {
  MonotoneResult r = product_overlap(psi, opts);
  r.value = std::max(0.0, 1.0 - r.value);
  r.kind = BoundKind::upper_bound;
  r.method = "1 - product overlap (alternating optimization)";
  return r;
}

MonotoneResult geometric_measure_ensemble_ub(const Ensemble& rho,
                                             const OverlapOptions& opts) {
  MonotoneResult result;
  result.kind = BoundKind::upper_bound;
  result.method = "decomposition-relative average of per-term values";
  double value = 0.0;
  bool converged = true;
  for (const auto& [p, psi] : rho.terms()) {
    const MonotoneResult term = geometric_measure(psi, opts);
    value += p * term.value;
    converged = converged && term.converged;
    result.iterations += term.iterations;
    result.restarts = term.restarts;
  }
  result.value = value;
  result.converged = converged;
  return result;
}

// ---------------------------------------------------------------------------
// Width measures

int schmidt_rank(const PureState& psi, const Bipartition& cut,
                 double rank_tol) {
  if (rank_tol <= 0.0) throw std::invalid_argument("rank_tol must be > 0");
  const std::vector<double> sv = schmidt_coefficients(psi, cut);
  const double cutoff = rank_tol * sv.front();
  int rank = 0;
  for (double s : sv)
    if (s > cutoff) ++rank;
  return rank;
}

namespace {

double entropy_bits(const std::vector<double>& sv) {
  double h = 0.0;
  for (double s : sv) {
    const double p = s * s;
    if (p > 1e-15) h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

// min over trees of max over edge cuts of `score`, with cut memoization on
// canonical leaf bitmasks (the side containing leaf 0).
MonotoneResult width_over_trees(
    const PureState& psi,
    const std::function<double(const Bipartition&)>& score,
    const std::string& method) {
  const int n = psi.num_qubits();
  MonotoneResult result;
  result.kind = BoundKind::exact;
  result.method = method;

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::unordered_map<std::uint64_t, double> memo;
  auto cut_score = [&](std::uint64_t mask) {
    const std::uint64_t key = (mask & 1ULL) ? mask : (full ^ mask);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<int> leaves;
    for (int q = 0; q < n; ++q)
      if ((key >> q) & 1) leaves.push_back(q);
    const double s = score(Bipartition(n, leaves));
    memo.emplace(key, s);
    return s;
  };

  if (n == 2) {
    result.value = cut_score(1);
    result.method += " (single bipartition, n = 2)";
    result.witness_tree = SubcubicTree{2, {{0, 1}}};
    result.iterations = 1;
    return result;
  }
  if (n > tree_leaf_limit())
    throw capacity_error("width computation capped at " +
                         std::to_string(tree_leaf_limit()) + " leaves");

  double best = std::numeric_limits<double>::infinity();
  SubcubicTree witness;
  int trees = 0;
  for_each_subcubic_tree(n, [&](const SubcubicTree& t) {
    ++trees;
    double tree_max = 0.0;
    for (std::uint64_t mask : t.edge_leaf_masks()) {
      tree_max = std::max(tree_max, cut_score(mask));
      if (tree_max >= best) break;  // this tree cannot improve the minimum
    }
    if (tree_max < best) {
      best = tree_max;
      witness = t;
    }
    return true;
  });
  result.value = best;
  result.witness_tree = std::move(witness);
  result.iterations = trees;
  return result;
}

}  // namespace

MonotoneResult schmidt_rank_width(const PureState& psi, double rank_tol) {
  return width_over_trees(
      psi,
      [&](const Bipartition& cut) {
        return static_cast<double>(schmidt_rank(psi, cut, rank_tol));
      },
      "min-max Schmidt rank over subcubic trees");
}

MonotoneResult entropic_entanglement_width(const PureState& psi) {
  return width_over_trees(
      psi,
      [&](const Bipartition& cut) {
        return entropy_bits(schmidt_coefficients(psi, cut));
      },
      "min-max cut entropy over subcubic trees");
}

// ---------------------------------------------------------------------------
// Families

StateFamily state_family(const std::string& name, double param) {
  if (name == "w")
    return {"w", 2, [](int k) { return k; },
            [](int k) { return make_w_state(k); }};
  if (name == "ghz")
    return {"ghz", 2, [](int k) { return k; },
            [](int k) { return make_ghz(k); }};
  if (name == "cluster1d")
    return {"cluster1d", 2, [](int k) { return k; },
            [](int k) { return make_graph_state(Graph::path(k)); }};
  if (name == "cluster2d")
    return {"cluster2d", 2, [](int d) { return d * d; },
            [](int d) { return make_graph_state(Graph::grid(d, d)); }};
  if (name == "deformed")
    return {"deformed", 2, [](int d) { return d * d; },
            [param](int d) {
              return make_deformed_cluster(Graph::grid(d, d), param);
            }};
  if (name == "product")
    return {"product", 2, [](int k) { return k; },
            [](int k) { return PureState::computational(k, 0); }};
  throw std::invalid_argument("unknown family: " + name);
}

MonotoneResult family_supremum(const StateFamily& family, MeasureId measure,
                               int size_cap,
                               const FamilySupremumOptions& opts) {
  const bool tree_based = measure != MeasureId::geometric;
  MonotoneResult result;
  result.kind = BoundKind::lower_bound;
  result.method = "family-supremum over generated members up to size cap";

  for (int i = family.min_index;; ++i) {
    const int qubits = family.qubits(i);
    if (qubits > size_cap) break;
    if (tree_based && qubits > tree_leaf_limit()) break;
    const PureState member = family.member(i);
    double value = 0.0;
    switch (measure) {
      case MeasureId::geometric:
        value = geometric_measure(member, opts.overlap).value;
        break;
      case MeasureId::chi_width:
        value = schmidt_rank_width(member, opts.rank_tol).value;
        break;
      case MeasureId::entropic_width:
        value = entropic_entanglement_width(member).value;
        break;
    }
    result.per_size.emplace_back(qubits, value);
  }
  if (result.per_size.empty())
    throw std::invalid_argument(
        "no family member fits under the requested size cap");
  for (const auto& [sz, v] : result.per_size)
    result.value = std::max(result.value, v);
  return result;
}

}  // namespace mbqc

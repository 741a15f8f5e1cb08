#include "mbqc/qstate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace mbqc {

int& dense_qubit_limit() {
  static int limit = 14;
  return limit;
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("unknown Pauli: ") + c);
  }
}

char pauli_to_char(Pauli p) {
  switch (p) {
    case Pauli::I:
      return 'I';
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

namespace {

double norm_squared(std::span<const complexd> amps) {
  double s = 0.0;
  for (const complexd& a : amps) s += std::norm(a);
  return s;
}

void check_qubit_count(int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  if (n > dense_qubit_limit())
    throw capacity_error("state of " + std::to_string(n) +
                         " qubits exceeds the dense limit of " +
                         std::to_string(dense_qubit_limit()));
}

}  // namespace

PureState::PureState(int n, std::vector<complexd> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  check_qubit_count(n_);
  if (amps_.size() != (std::size_t{1} << n_))
    throw std::invalid_argument("amplitude count must be 2^n");
  if (std::abs(norm_squared(amps_) - 1.0) > kNormTolerance)
    throw std::invalid_argument("state is not normalized");
}

PureState PureState::normalized(int n, std::vector<complexd> amplitudes) {
  const double s = norm_squared(amplitudes);
  if (s <= 0.0 || !std::isfinite(s))
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  const double inv = 1.0 / std::sqrt(s);
  for (complexd& a : amplitudes) a *= inv;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::computational(int n, std::uint64_t basis_index) {
  check_qubit_count(n);
  if (basis_index >= (std::uint64_t{1} << n))
    throw std::invalid_argument("basis index out of range");
  std::vector<complexd> amps(std::size_t{1} << n, complexd{0.0, 0.0});
  amps[basis_index] = 1.0;
  return PureState(n, std::move(amps));
}

Ensemble::Ensemble(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("ensemble has no terms");
  const int n = terms_.front().second.num_qubits();
  double total = 0.0;
  for (const Term& t : terms_) {
    if (t.first < 0.0)
      throw std::invalid_argument("ensemble probabilities must be >= 0");
    if (t.second.num_qubits() != n)
      throw std::invalid_argument("ensemble terms have mixed qubit counts");
    total += t.first;
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    throw std::invalid_argument("ensemble probabilities must sum to 1");
}

Ensemble Ensemble::pure(PureState psi) {
  std::vector<Term> t;
  t.emplace_back(1.0, std::move(psi));
  return Ensemble(std::move(t));
}

int Ensemble::num_qubits() const { return terms_.front().second.num_qubits(); }

Graph::Graph(int num_vertices, std::vector<std::pair<int, int>> edges)
    : num_vertices_(num_vertices) {
  if (num_vertices_ < 1)
    throw std::invalid_argument("graph needs at least one vertex");
  std::set<std::pair<int, int>> dedup;
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (u < 0 || v < 0 || u >= num_vertices_ || v >= num_vertices_)
      throw std::invalid_argument("edge endpoint out of range");
    dedup.emplace(std::min(u, v), std::max(u, v));
  }
  edges_.assign(dedup.begin(), dedup.end());
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph Graph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("grid dimensions must be >= 1");
  std::vector<std::pair<int, int>> e;
  auto at = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(at(r, c), at(r, c + 1));
      if (r + 1 < rows) e.emplace_back(at(r, c), at(r + 1, c));
    }
  return Graph(rows * cols, std::move(e));
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{u, v});
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (auto [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Bipartition::Bipartition(int num_qubits, std::vector<int> side_a)
    : n_(num_qubits), side_a_(std::move(side_a)) {
  if (n_ < 2) throw std::invalid_argument("bipartition needs >= 2 qubits");
  std::sort(side_a_.begin(), side_a_.end());
  side_a_.erase(std::unique(side_a_.begin(), side_a_.end()), side_a_.end());
  if (side_a_.empty() || static_cast<int>(side_a_.size()) >= n_)
    throw std::invalid_argument("side A must be a nonempty proper subset");
  for (int q : side_a_)
    if (q < 0 || q >= n_)
      throw std::invalid_argument("bipartition qubit out of range");
  for (int q = 0; q < n_; ++q)
    if (!std::binary_search(side_a_.begin(), side_a_.end(), q))
      side_b_.push_back(q);
}

PureState make_w_state(int n) {
  if (n < 2) throw std::invalid_argument("W state needs n >= 2");
  check_qubit_count(n);
  std::vector<complexd> amps(std::size_t{1} << n, complexd{0.0, 0.0});
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int q = 0; q < n; ++q) amps[std::uint64_t{1} << q] = a;
  return PureState(n, std::move(amps));
}

PureState make_ghz(int n) {
  if (n < 2) throw std::invalid_argument("GHZ state needs n >= 2");
  check_qubit_count(n);
  std::vector<complexd> amps(std::size_t{1} << n, complexd{0.0, 0.0});
  const double a = 1.0 / std::sqrt(2.0);
  amps.front() = a;
  amps.back() = a;
  return PureState(n, std::move(amps));
}

PureState make_graph_state(const Graph& g) {
  const int n = g.num_vertices();
  check_qubit_count(n);
  const std::size_t dim = std::size_t{1} << n;
  const double a = std::pow(2.0, -0.5 * n);
  std::vector<complexd> amps(dim, complexd{a, 0.0});
  for (auto [u, v] : g.edges()) {
    const std::uint64_t mask =
        (std::uint64_t{1} << (n - 1 - u)) | (std::uint64_t{1} << (n - 1 - v));
    for (std::size_t x = 0; x < dim; ++x)
      if ((x & mask) == mask) amps[x] = -amps[x];
  }
  return PureState(n, std::move(amps));
}

PureState make_deformed_cluster(const Graph& g, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("deformation parameter must lie in [0, 1]");
  PureState base = make_graph_state(g);
  const int n = base.num_qubits();
  std::vector<complexd> amps(base.amplitudes().begin(),
                             base.amplitudes().end());
  for (std::size_t x = 0; x < amps.size(); ++x)
    amps[x] *= std::pow(lambda, std::popcount(x));
  return PureState::normalized(n, std::move(amps));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("fidelity: qubit counts differ");
  complexd ip{0.0, 0.0};
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  for (std::size_t i = 0; i < av.size(); ++i) ip += std::conj(av[i]) * bv[i];
  return std::norm(ip);
}

double fidelity(const Ensemble& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("fidelity: qubit counts differ");
  double f = 0.0;
  for (const auto& [p, psi] : a.terms()) f += p * fidelity(psi, b);
  return f;
}

double trace_distance(const Ensemble& a, const Ensemble& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("trace_distance: qubit counts differ");
  const std::size_t dim = a.terms().front().second.dim();
  const int k = static_cast<int>(a.size() + b.size());

  // rho_a - rho_b is supported on the span of all terms; an orthonormal
  // basis of that span turns the eigenproblem into a k x k one.
  Eigen::MatrixXcd v(dim, k);
  int col = 0;
  for (const auto& [p, psi] : a.terms()) {
    for (std::size_t i = 0; i < dim; ++i) v(i, col) = psi.amplitude(i);
    ++col;
  }
  for (const auto& [p, psi] : b.terms()) {
    for (std::size_t i = 0; i < dim; ++i) v(i, col) = psi.amplitude(i);
    ++col;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
  const int r = static_cast<int>(qr.rank());
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, r);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, r);
  col = 0;
  for (const auto& [p, psi] : a.terms()) {
    const Eigen::VectorXcd c = q.adjoint() * v.col(col++);
    m += p * c * c.adjoint();
  }
  for (const auto& [p, psi] : b.terms()) {
    const Eigen::VectorXcd c = q.adjoint() * v.col(col++);
    m -= p * c * c.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const PureState& a, const PureState& b) {
  return trace_distance(Ensemble::pure(a), Ensemble::pure(b));
}

double trace_distance(const Ensemble& a, const PureState& b) {
  return trace_distance(a, Ensemble::pure(b));
}

double trace_distance(const PureState& a, const Ensemble& b) {
  return trace_distance(Ensemble::pure(a), b);
}

std::vector<double> schmidt_coefficients(const PureState& psi,
                                         const Bipartition& cut) {
  const int n = psi.num_qubits();
  if (cut.num_qubits() != n)
    throw std::invalid_argument("bipartition size does not match state");
  const auto& qa = cut.side_a();
  const auto& qb = cut.side_b();
  const std::size_t ra = std::size_t{1} << qa.size();
  const std::size_t rb = std::size_t{1} << qb.size();

  Eigen::MatrixXcd m(ra, rb);
  for (std::size_t x = 0; x < psi.dim(); ++x) {
    std::size_t ia = 0, ib = 0;
    for (std::size_t j = 0; j < qa.size(); ++j)
      ia = (ia << 1) | PureState::basis_bit(x, n, qa[j]);
    for (std::size_t j = 0; j < qb.size(); ++j)
      ib = (ib << 1) | PureState::basis_bit(x, n, qb[j]);
    m(ia, ib) = psi.amplitude(x);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

PureState apply_one_qubit(const PureState& psi, int qubit, complexd m00,
                          complexd m01, complexd m10, complexd m11) {
  const int n = psi.num_qubits();
  if (qubit < 0 || qubit >= n)
    throw std::invalid_argument("qubit index out of range");
  std::vector<complexd> amps(psi.amplitudes().begin(),
                             psi.amplitudes().end());
  const std::uint64_t mask = std::uint64_t{1} << (n - 1 - qubit);
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (x & mask) continue;
    const complexd a0 = amps[x];
    const complexd a1 = amps[x | mask];
    amps[x] = m00 * a0 + m01 * a1;
    amps[x | mask] = m10 * a0 + m11 * a1;
  }
  return PureState::normalized(n, std::move(amps));
}

PureState apply_pauli(const PureState& psi, int qubit, Pauli p) {
  switch (p) {
    case Pauli::I:
      return psi;
    case Pauli::X:
      return apply_one_qubit(psi, qubit, 0, 1, 1, 0);
    case Pauli::Y:
      return apply_one_qubit(psi, qubit, 0, complexd{0, -1}, complexd{0, 1},
                             0);
    case Pauli::Z:
      return apply_one_qubit(psi, qubit, 1, 0, 0, -1);
  }
  throw std::invalid_argument("unknown Pauli");
}

PureState tensor(const PureState& a, const PureState& b) {
  const int n = a.num_qubits() + b.num_qubits();
  check_qubit_count(n);
  std::vector<complexd> amps(std::size_t{1} << n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amps[(i << b.num_qubits()) | j] = a.amplitude(i) * b.amplitude(j);
  return PureState(n, std::move(amps));
}

PureState extend_with_zero_qubits(const PureState& psi, int count) {
  if (count < 0) throw std::invalid_argument("qubit count must be >= 0");
  if (count == 0) return psi;
  return tensor(psi, PureState::computational(count, 0));
}

std::vector<complexd> contract_qubit(std::span<const complexd> amps, int n,
                                     int qubit,
                                     const std::array<complexd, 2>& bra) {
  const int shift = n - 1 - qubit;
  const std::size_t high = std::size_t{1} << qubit;        // values above bit
  const std::size_t low = std::size_t{1} << shift;         // values below bit
  std::vector<complexd> out(amps.size() / 2);
  const complexd c0 = std::conj(bra[0]);
  const complexd c1 = std::conj(bra[1]);
  for (std::size_t h = 0; h < high; ++h)
    for (std::size_t l = 0; l < low; ++l) {
      const std::size_t base = (h << (shift + 1)) | l;
      out[(h << shift) | l] = c0 * amps[base] + c1 * amps[base | low];
    }
  return out;
}

Ensemble discard_qubits(const Ensemble& rho, const std::vector<int>& qubits) {
  if (qubits.empty()) return rho;
  std::vector<int> qs = qubits;
  std::sort(qs.begin(), qs.end());
  if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
    throw std::invalid_argument("duplicate qubit in discard set");
  const int n = rho.num_qubits();
  if (qs.front() < 0 || qs.back() >= n)
    throw std::invalid_argument("discard qubit out of range");
  if (static_cast<int>(qs.size()) >= n)
    throw std::invalid_argument("cannot discard every qubit");

  std::vector<Ensemble::Term> out;
  for (const auto& [p, psi] : rho.terms()) {
    // Project the discarded subsystem onto each computational basis string.
    std::vector<std::pair<double, std::vector<complexd>>> parts;
    parts.emplace_back(p, std::vector<complexd>(psi.amplitudes().begin(),
                                                psi.amplitudes().end()));
    int removed = 0;
    for (int q : qs) {
      std::vector<std::pair<double, std::vector<complexd>>> next;
      const int cur_n = n - removed;
      const int cur_q = q - removed;
      for (auto& [w, amps] : parts)
        for (int b = 0; b < 2; ++b) {
          const std::array<complexd, 2> bra{complexd(b == 0 ? 1.0 : 0.0),
                                            complexd(b == 1 ? 1.0 : 0.0)};
          std::vector<complexd> res = contract_qubit(amps, cur_n, cur_q, bra);
          double s = 0.0;
          for (const complexd& a : res) s += std::norm(a);
          if (w * s > 1e-15) next.emplace_back(w * s, std::move(res));
        }
      parts = std::move(next);
      ++removed;
    }
    for (auto& [w, amps] : parts)
      out.emplace_back(
          w, PureState::normalized(n - static_cast<int>(qs.size()),
                                   std::move(amps)));
  }
  // Projection can shave a little mass off at the numerical floor; rescale.
  double total = 0.0;
  for (const auto& t : out) total += t.first;
  for (auto& t : out) t.first /= total;
  return Ensemble(std::move(out));
}

Ensemble discard_qubits(const PureState& psi, const std::vector<int>& qubits) {
  return discard_qubits(Ensemble::pure(psi), qubits);
}

PureState random_state(int n, SplitMix64& rng) {
  check_qubit_count(n);
  std::vector<complexd> amps(std::size_t{1} << n);
  for (complexd& a : amps) a = complexd(rng.gaussian(), rng.gaussian());
  return PureState::normalized(n, std::move(amps));
}

std::array<complexd, 2> random_qubit(SplitMix64& rng) {
  complexd a(rng.gaussian(), rng.gaussian());
  complexd b(rng.gaussian(), rng.gaussian());
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  return {a / s, b / s};
}

std::array<complexd, 4> random_unitary2(SplitMix64& rng) {
  // QR of a complex gaussian matrix with the R-diagonal phase fix.
  const auto c1 = random_qubit(rng);
  // Gram-Schmidt a second gaussian column against the first.
  complexd a(rng.gaussian(), rng.gaussian());
  complexd b(rng.gaussian(), rng.gaussian());
  const complexd ip = std::conj(c1[0]) * a + std::conj(c1[1]) * b;
  a -= ip * c1[0];
  b -= ip * c1[1];
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  const double phase = rng.uniform(0.0, 6.28318530717958647692);
  const complexd ph(std::cos(phase), std::sin(phase));
  return {c1[0], ph * a / s, c1[1], ph * b / s};
}

}  // namespace mbqc

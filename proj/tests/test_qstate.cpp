#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "mbqc/io.hpp"
#include "mbqc/qstate.hpp"

using namespace mbqc;

namespace {

double norm_sq(const PureState& psi) {
  double s = 0.0;
  for (const complexd& a : psi.amplitudes()) s += std::norm(a);
  return s;
}

// Independent route to the trace distance: materialize both density
// matrices and diagonalize the full-dimension difference.
double dense_trace_distance(const Ensemble& a, const Ensemble& b) {
  const std::size_t dim = a.terms().front().second.dim();
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, psi] : a.terms()) {
    Eigen::VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = psi.amplitude(i);
    diff += p * v * v.adjoint();
  }
  for (const auto& [p, psi] : b.terms()) {
    Eigen::VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = psi.amplitude(i);
    diff -= p * v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff,
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Ensemble random_ensemble(int n, int terms, SplitMix64& rng) {
  std::vector<Ensemble::Term> t;
  double total = 0.0;
  std::vector<double> ps;
  for (int i = 0; i < terms; ++i) {
    ps.push_back(rng.uniform() + 0.05);
    total += ps.back();
  }
  for (int i = 0; i < terms; ++i)
    t.emplace_back(ps[i] / total, random_state(n, rng));
  return Ensemble(std::move(t));
}

}  // namespace

TEST_CASE("w state layout and norm") {
  const PureState w2 = make_w_state(2);
  CHECK(w2.amplitude(0) == complexd(0.0));
  CHECK(w2.amplitude(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(w2.amplitude(2).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(w2.amplitude(3) == complexd(0.0));

  const PureState w3 = make_w_state(3);
  for (std::size_t idx : {1u, 2u, 4u})
    CHECK(w3.amplitude(idx).real() ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  for (std::size_t idx : {0u, 3u, 5u, 6u, 7u}) CHECK(w3.amplitude(idx) == complexd(0.0));

  for (int n : {2, 5, 9}) CHECK(norm_sq(make_w_state(n)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_w_state(1), std::invalid_argument);
}

TEST_CASE("ghz state and its cuts") {
  const PureState bell = make_ghz(2);
  const auto sv = schmidt_coefficients(bell, Bipartition(2, {0}));
  REQUIRE(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sv[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Every bipartition of GHZ_4 has numerical rank 2 (independent SVD on a
  // reshape built here).
  const PureState ghz4 = make_ghz(4);
  int cuts = 0;
  for (int mask = 1; mask < 15; ++mask) {
    if ((mask & 1) == 0) continue;  // count each split once
    std::vector<int> side;
    for (int q = 0; q < 4; ++q)
      if ((mask >> q) & 1) side.push_back(q);
    if (side.size() == 4) continue;
    ++cuts;
    const std::size_t ra = std::size_t{1} << side.size();
    Eigen::MatrixXcd m(ra, 16 / ra);
    m.setZero();
    for (std::size_t x = 0; x < 16; ++x) {
      std::size_t ia = 0, ib = 0;
      for (int q = 0; q < 4; ++q) {
        const bool bit = PureState::basis_bit(x, 4, q);
        if ((mask >> q) & 1)
          ia = (ia << 1) | bit;
        else
          ib = (ib << 1) | bit;
      }
      m(ia, ib) = ghz4.amplitude(x);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10) ++rank;
    CHECK(rank == 2);
  }
  CHECK(cuts == 7);

  const PureState ghz5 = make_ghz(5);
  int nonzero = 0;
  for (const complexd& a : ghz5.amplitudes())
    if (std::abs(a) > 0) {
      ++nonzero;
      CHECK(std::abs(a) == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
  CHECK(nonzero == 2);
}

TEST_CASE("graph state construction") {
  const PureState empty3 = make_graph_state(Graph(3));
  for (const complexd& a : empty3.amplitudes()) {
    CHECK(a.real() == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(a.imag() == 0.0);
  }

  const PureState edge = make_graph_state(Graph(2, {{0, 1}}));
  CHECK(edge.amplitude(0).real() == doctest::Approx(0.5));
  CHECK(edge.amplitude(1).real() == doctest::Approx(0.5));
  CHECK(edge.amplitude(2).real() == doctest::Approx(0.5));
  CHECK(edge.amplitude(3).real() == doctest::Approx(-0.5));

  // 3-vertex path vs a straight-line sequential-CZ circuit.
  std::vector<complexd> amps(8, complexd(std::pow(2.0, -1.5), 0.0));
  auto cz = [&](int u, int v) {
    for (std::size_t x = 0; x < 8; ++x)
      if (PureState::basis_bit(x, 3, u) && PureState::basis_bit(x, 3, v))
        amps[x] = -amps[x];
  };
  cz(0, 1);
  cz(1, 2);
  const PureState expected(3, amps);
  CHECK(fidelity(make_graph_state(Graph::path(3)), expected) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(make_graph_state(Graph::grid(4, 4)), capacity_error);
}

TEST_CASE("deformed cluster overlap law") {
  const Graph g = Graph::grid(2, 2);
  CHECK(fidelity(make_deformed_cluster(g, 1.0), make_graph_state(g)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Squared overlap with the clean state follows the closed form
  // ((1+l)^2 / (2 (1+l^2)))^M.
  SplitMix64 rng(7);
  for (const Graph& graph : {Graph::path(3), Graph::grid(2, 2)}) {
    for (int i = 0; i < 5; ++i) {
      const double lam = rng.uniform(0.05, 1.0);
      const double per_site =
          (1.0 + lam) * (1.0 + lam) / (2.0 * (1.0 + lam * lam));
      const double expected = std::pow(per_site, graph.num_vertices());
      CHECK(fidelity(make_deformed_cluster(graph, lam),
                     make_graph_state(graph)) ==
            doctest::Approx(expected).epsilon(1e-10));
      CHECK(norm_sq(make_deformed_cluster(graph, lam)) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  const double lam = 0.6490;
  const double expected =
      std::pow((1.0 + lam) * (1.0 + lam) / (2.0 * (1.0 + lam * lam)), 4);
  CHECK(fidelity(make_deformed_cluster(g, lam), make_graph_state(g)) ==
        doctest::Approx(expected).epsilon(1e-10));

  // lambda = 0 projects onto the all-zeros component.
  const PureState collapsed = make_deformed_cluster(g, 0.0);
  CHECK(std::abs(collapsed.amplitude(0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_deformed_cluster(g, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_deformed_cluster(g, -0.1), std::invalid_argument);
}

TEST_CASE("fidelity basics") {
  SplitMix64 rng(3);
  const PureState a = random_state(3, rng);
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(PureState::computational(2, 0),
                 PureState::computational(2, 3)) == doctest::Approx(0.0));

  const PureState b = random_state(3, rng);
  complexd ip{0, 0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    ip += std::conj(a.amplitude(i)) * b.amplitude(i);
  CHECK(fidelity(a, b) == doctest::Approx(std::norm(ip)).epsilon(1e-12));
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-12));

  const Ensemble mix({{0.25, a}, {0.75, b}});
  CHECK(fidelity(mix, a) ==
        doctest::Approx(0.25 + 0.75 * fidelity(b, a)).epsilon(1e-12));

  CHECK_THROWS_AS(fidelity(a, random_state(2, rng)), std::invalid_argument);
}

TEST_CASE("trace distance against the dense oracle") {
  SplitMix64 rng(11);
  const PureState a = random_state(2, rng);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(trace_distance(PureState::computational(2, 1),
                       PureState::computational(2, 2)) ==
        doctest::Approx(1.0));

  // Pure pair at fidelity 0.75: eigenvalues of the rank-2 difference give
  // distance 1/2.
  const PureState u = PureState::computational(1, 0);
  const PureState v(1, {std::sqrt(0.75), std::sqrt(0.25)});
  CHECK(trace_distance(u, v) == doctest::Approx(0.5).epsilon(1e-12));

  for (int i = 0; i < 20; ++i) {
    const PureState x = random_state(3, rng);
    const PureState y = random_state(3, rng);
    CHECK(trace_distance(x, y) ==
          doctest::Approx(std::sqrt(1.0 - fidelity(x, y))).epsilon(1e-10));
  }

  for (int i = 0; i < 10; ++i) {
    const Ensemble ea = random_ensemble(3, 2, rng);
    const Ensemble eb = random_ensemble(3, 3, rng);
    CHECK(trace_distance(ea, eb) ==
          doctest::Approx(dense_trace_distance(ea, eb)).epsilon(1e-9));
  }
}

TEST_CASE("trace distance: triangle inequality and contraction") {
  SplitMix64 rng(13);
  for (int i = 0; i < 15; ++i) {
    const Ensemble a = random_ensemble(3, 2, rng);
    const Ensemble b = random_ensemble(3, 2, rng);
    const Ensemble c = random_ensemble(3, 2, rng);
    CHECK(trace_distance(a, c) <=
          trace_distance(a, b) + trace_distance(b, c) + 1e-9);
  }
  for (int i = 0; i < 15; ++i) {
    const Ensemble a = random_ensemble(3, 2, rng);
    const Ensemble b = random_ensemble(3, 2, rng);
    const int q = static_cast<int>(rng.next() % 3);
    CHECK(trace_distance(discard_qubits(a, {q}), discard_qubits(b, {q})) <=
          trace_distance(a, b) + 1e-9);
  }
}

TEST_CASE("schmidt coefficients") {
  const PureState prod = PureState::computational(3, 5);
  const auto sv = schmidt_coefficients(prod, Bipartition(3, {1}));
  CHECK(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(1.0));
  CHECK(sv[1] == doctest::Approx(0.0));

  const auto ghz_sv =
      schmidt_coefficients(make_ghz(4), Bipartition(4, {0, 1}));
  REQUIRE(ghz_sv.size() == 4);
  CHECK(ghz_sv[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(ghz_sv[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(ghz_sv[2] == doctest::Approx(0.0));
  CHECK(ghz_sv[3] == doctest::Approx(0.0));

  SplitMix64 rng(5);
  const PureState r = random_state(4, rng);
  const auto rv = schmidt_coefficients(r, Bipartition(4, {0, 2}));
  double sum = 0.0;
  for (double s : rv) sum += s * s;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::is_sorted(rv.rbegin(), rv.rend()));
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(PureState(2, {1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PureState(1, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(PureState::normalized(1, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({{0.5, make_ghz(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({{0.5, make_ghz(2)}, {0.5, make_ghz(3)}}),
                  std::invalid_argument);

  const Graph g(4, {{2, 1}, {1, 2}, {0, 3}});
  CHECK(g.edges().size() == 2);  // deduplicated and normalized
  CHECK(g.has_edge(2, 1));
  CHECK(g.neighbors(1) == std::vector<int>{2});
}

TEST_CASE("json round trips are bit-exact") {
  SplitMix64 rng(17);
  const PureState psi = random_state(3, rng);
  const PureState back = state_from_json(
      nlohmann::json::parse(state_to_json(psi).dump()));
  REQUIRE(back.dim() == psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    CHECK(back.amplitude(i).real() == psi.amplitude(i).real());
    CHECK(back.amplitude(i).imag() == psi.amplitude(i).imag());
  }

  const Graph g = Graph::grid(2, 3);
  const Graph gback =
      graph_from_json(nlohmann::json::parse(graph_to_json(g).dump()));
  CHECK(gback.num_vertices() == g.num_vertices());
  CHECK(gback.edges() == g.edges());

  const Ensemble e({{0.3, make_ghz(2)}, {0.7, make_w_state(2)}});
  const Ensemble eback = ensemble_from_json(
      nlohmann::json::parse(ensemble_to_json(e).dump()));
  CHECK(eback.terms().front().first == e.terms().front().first);
}

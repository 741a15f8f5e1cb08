#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbqc/criteria.hpp"
#include "mbqc/epsilon.hpp"
#include "mbqc/locc.hpp"
#include "mbqc/monotones.hpp"
#include "mbqc/percolation.hpp"
#include "mbqc/qstate.hpp"

namespace py = pybind11;
using namespace mbqc;

namespace {

std::vector<complexd> amplitudes_of(const PureState& psi) {
  return {psi.amplitudes().begin(), psi.amplitudes().end()};
}

Graph make_graph(int vertices, const std::vector<std::pair<int, int>>& edges) {
  return Graph(vertices, edges);
}

OverlapOptions overlap_options(int restarts, double tol, std::uint64_t seed) {
  OverlapOptions o;
  o.restarts = restarts;
  o.tol = tol;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "entanglement monotones, universality criteria, percolation and "
            "measurement-protocol experiments";

  py::register_exception<capacity_error>(m, "CapacityError");

  py::class_<PureState>(m, "PureState")
      .def(py::init<int, std::vector<complexd>>(), py::arg("n"),
           py::arg("amplitudes"))
      .def_static("computational", &PureState::computational, py::arg("n"),
                  py::arg("basis_index"))
      .def_property_readonly("n", &PureState::num_qubits)
      .def_property_readonly("amplitudes", &amplitudes_of);

  py::class_<Ensemble>(m, "Ensemble")
      .def(py::init<std::vector<Ensemble::Term>>(), py::arg("terms"))
      .def_static("pure", &Ensemble::pure)
      .def_property_readonly("n", &Ensemble::num_qubits)
      .def_property_readonly("terms", &Ensemble::terms);

  py::class_<Graph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("vertices"),
           py::arg("edges") = std::vector<std::pair<int, int>>{})
      .def_static("path", &Graph::path)
      .def_static("cycle", &Graph::cycle)
      .def_static("grid", &Graph::grid)
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("edges", &Graph::edges);

  py::class_<Bipartition>(m, "Bipartition")
      .def(py::init<int, std::vector<int>>(), py::arg("n"),
           py::arg("side_a"))
      .def_property_readonly("side_a", &Bipartition::side_a)
      .def_property_readonly("side_b", &Bipartition::side_b);

  m.def("make_w_state", &make_w_state, py::arg("n"));
  m.def("make_ghz", &make_ghz, py::arg("n"));
  m.def("make_graph_state", &make_graph_state, py::arg("graph"));
  m.def("make_deformed_cluster", &make_deformed_cluster, py::arg("graph"),
        py::arg("lam"));

  m.def("fidelity",
        py::overload_cast<const PureState&, const PureState&>(&fidelity));
  m.def("fidelity",
        py::overload_cast<const Ensemble&, const PureState&>(&fidelity));
  m.def("trace_distance",
        py::overload_cast<const PureState&, const PureState&>(
            &trace_distance));
  m.def("trace_distance",
        py::overload_cast<const Ensemble&, const Ensemble&>(&trace_distance));
  m.def("trace_distance",
        py::overload_cast<const Ensemble&, const PureState&>(
            &trace_distance));
  m.def("trace_distance",
        py::overload_cast<const PureState&, const Ensemble&>(
            &trace_distance));
  m.def("schmidt_coefficients", &schmidt_coefficients, py::arg("state"),
        py::arg("cut"));
  m.def(
      "apply_pauli",
      [](const PureState& psi, int qubit, const std::string& p) {
        if (p.size() != 1) throw std::invalid_argument("one Pauli character");
        return apply_pauli(psi, qubit, pauli_from_char(p[0]));
      },
      py::arg("state"), py::arg("qubit"), py::arg("pauli"));
  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("extend_with_zero_qubits", &extend_with_zero_qubits, py::arg("state"),
        py::arg("count"));
  m.def("discard_qubits",
        py::overload_cast<const Ensemble&, const std::vector<int>&>(
            &discard_qubits),
        py::arg("state"), py::arg("qubits"));
  m.def(
      "random_state",
      [](int n, std::uint64_t seed) {
        SplitMix64 rng(seed);
        return random_state(n, rng);
      },
      py::arg("n"), py::arg("seed"));

  py::class_<MonotoneResult>(m, "MonotoneResult")
      .def_readonly("value", &MonotoneResult::value)
      .def_property_readonly(
          "kind", [](const MonotoneResult& r) { return to_string(r.kind); })
      .def_readonly("method", &MonotoneResult::method)
      .def_readonly("iterations", &MonotoneResult::iterations)
      .def_readonly("restarts", &MonotoneResult::restarts)
      .def_readonly("converged", &MonotoneResult::converged)
      .def_readonly("per_size", &MonotoneResult::per_size);

  m.def(
      "product_overlap",
      [](const PureState& psi, int restarts, double tol, std::uint64_t seed) {
        return product_overlap(psi, overlap_options(restarts, tol, seed));
      },
      py::arg("state"), py::arg("restarts") = 32, py::arg("tol") = 1e-10,
      py::arg("seed") = 0x5eed);
  m.def(
      "geometric_measure",
      [](const PureState& psi, int restarts, double tol, std::uint64_t seed) {
        return geometric_measure(psi, overlap_options(restarts, tol, seed));
      },
      py::arg("state"), py::arg("restarts") = 32, py::arg("tol") = 1e-10,
      py::arg("seed") = 0x5eed);
  m.def("schmidt_rank", &schmidt_rank, py::arg("state"), py::arg("cut"),
        py::arg("rank_tol") = kDefaultRankTol);
  m.def("schmidt_rank_width", &schmidt_rank_width, py::arg("state"),
        py::arg("rank_tol") = kDefaultRankTol);
  m.def("entropic_entanglement_width", &entropic_entanglement_width,
        py::arg("state"));
  m.def(
      "family_supremum",
      [](const std::string& family, const std::string& measure, int cap,
         double lam) {
        return family_supremum(state_family(family, lam),
                               measure_from_string(measure), cap);
      },
      py::arg("family"), py::arg("measure"), py::arg("cap"),
      py::arg("lam") = 0.8);
  m.def("subcubic_tree_count", [](int n) {
    return enumerate_subcubic_trees(n).size();
  });

  py::class_<EpsilonBound>(m, "EpsilonBound")
      .def_readonly("value", &EpsilonBound::value)
      .def_readonly("eta_used", &EpsilonBound::eta_used)
      .def_readonly("validity_ok", &EpsilonBound::validity_ok)
      .def_readonly("clamped", &EpsilonBound::clamped)
      .def_readonly("stationary_agrees", &EpsilonBound::stationary_agrees);

  m.def("eta_for_trace", &eta_for_trace, py::arg("eps"));
  m.def("eps_geo_variational", &eps_geo_variational, py::arg("eg"),
        py::arg("eta"));
  m.def("eps_geo_closed_form", &eps_geo_closed_form, py::arg("eg"),
        py::arg("eta"));
  m.def("eps_geo_star_lower", &eps_geo_star_lower, py::arg("eta"));

  py::class_<MassConcentrationReport>(m, "MassConcentrationReport")
      .def_readonly("measured_eta", &MassConcentrationReport::measured_eta)
      .def_readonly("delta", &MassConcentrationReport::delta)
      .def_readonly("close_mass", &MassConcentrationReport::close_mass)
      .def_readonly("lower_bound", &MassConcentrationReport::lower_bound)
      .def_readonly("holds", &MassConcentrationReport::holds);
  m.def("check_mass_concentration", &check_mass_concentration,
        py::arg("state"), py::arg("reference"), py::arg("delta"));

  py::class_<LipschitzReport>(m, "LipschitzReport")
      .def_readonly("eta", &LipschitzReport::eta)
      .def_readonly("eg_a", &LipschitzReport::eg_a)
      .def_readonly("eg_b", &LipschitzReport::eg_b)
      .def_readonly("difference", &LipschitzReport::difference)
      .def_readonly("bound", &LipschitzReport::bound)
      .def_readonly("holds", &LipschitzReport::holds);
  m.def(
      "check_geometric_lipschitz",
      [](const PureState& a, const PureState& b) {
        return check_geometric_lipschitz(a, b);
      },
      py::arg("a"), py::arg("b"));

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("family", &Verdict::family)
      .def_readonly("measure", &Verdict::measure)
      .def_readonly("check", &Verdict::check)
      .def_readonly("family_value", &Verdict::family_value)
      .def_readonly("required_value", &Verdict::required_value)
      .def_readonly("note", &Verdict::note)
      .def_property_readonly("decision", [](const Verdict& v) {
        return to_string(v.decision);
      });

  m.def(
      "check_approx_det",
      [](const std::string& family, double eta, const std::string& measure) {
        return check_approx_det(builtin_family(family), eta,
                                measure_from_string(measure));
      },
      py::arg("family"), py::arg("eta"), py::arg("measure") = "geometric");
  m.def(
      "check_approx_stoch",
      [](const std::string& family, double eta, double delta,
         const std::string& measure) {
        return check_approx_stoch(builtin_family(family), eta, delta,
                                  measure_from_string(measure));
      },
      py::arg("family"), py::arg("eta"), py::arg("delta"),
      py::arg("measure") = "geometric");
  m.def(
      "check_unbounded_measure",
      [](const std::string& family, const std::string& measure, double delta) {
        return check_unbounded_measure(builtin_family(family),
                                       measure_from_string(measure), delta);
      },
      py::arg("family"), py::arg("measure") = "chi-width",
      py::arg("delta") = 0.0);
  m.def("w_threshold_eta", &w_threshold_eta);
  m.def(
      "stability_frontier",
      [](double eps, double delta, double mu, int grid) {
        std::vector<std::pair<double, double>> out;
        for (const FrontierPoint& p :
             stability_frontier(eps, delta, mu, DistanceKind::trace, grid))
          out.emplace_back(p.eps_prime, p.delta_prime);
        return out;
      },
      py::arg("eps"), py::arg("delta"), py::arg("mu"), py::arg("grid") = 50);

  py::class_<PercolationEstimate>(m, "PercolationEstimate")
      .def_readonly("p_site", &PercolationEstimate::p_site)
      .def_readonly("trials", &PercolationEstimate::trials)
      .def_readonly("spanning_probability",
                    &PercolationEstimate::spanning_probability)
      .def_readonly("std_error", &PercolationEstimate::std_error);

  m.def("spanning_probability", &spanning_probability, py::arg("side"),
        py::arg("p_site"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1);
  m.def("estimate_threshold", &estimate_threshold, py::arg("side"),
        py::arg("trials_per_point"), py::arg("seed"), py::arg("threads") = 1);
  m.def("deformed_p_site", &deformed_p_site, py::arg("lam"));
  m.def("deformed_threshold", &deformed_threshold, py::arg("p_c"));

  py::class_<Protocol>(m, "Protocol");

  py::class_<BranchLeaf>(m, "BranchLeaf")
      .def_readonly("bits", &BranchLeaf::bits)
      .def_readonly("probability", &BranchLeaf::probability)
      .def_readonly("residual", &BranchLeaf::residual);

  py::class_<BranchTree>(m, "BranchTree")
      .def_readonly("leaves", &BranchTree::leaves)
      .def_readonly("pruned", &BranchTree::pruned)
      .def("merged", &BranchTree::merged);

  py::class_<RotationProtocol>(m, "RotationProtocol")
      .def_readonly("protocol", &RotationProtocol::protocol)
      .def_readonly("target", &RotationProtocol::target);

  m.def(
      "run_protocol",
      [](const Ensemble& state, const Protocol& p) {
        return run_protocol(state, p);
      },
      py::arg("state"), py::arg("protocol"));
  m.def(
      "run_protocol",
      [](const PureState& state, const Protocol& p) {
        return run_protocol(state, p);
      },
      py::arg("state"), py::arg("protocol"));
  m.def("one_way_rotation", &one_way_rotation, py::arg("xi"), py::arg("eta"),
        py::arg("zeta"));
  m.def(
      "chain_rotation_protocol",
      [](int n, const std::vector<double>& angles) {
        return chain_rotation_protocol(n, angles);
      },
      py::arg("n"), py::arg("angles"));
  m.def("grid2x2_protocol", &grid2x2_protocol, py::arg("alpha"),
        py::arg("beta"));

  py::class_<NoisyClusterReport>(m, "NoisyClusterReport")
      .def_readonly("p", &NoisyClusterReport::p)
      .def_readonly("branches", &NoisyClusterReport::branches)
      .def_readonly("max_branch_distance",
                    &NoisyClusterReport::max_branch_distance)
      .def_readonly("max_probability_deviation",
                    &NoisyClusterReport::max_probability_deviation)
      .def_readonly("averaged_fidelity",
                    &NoisyClusterReport::averaged_fidelity)
      .def_readonly("distances_ok", &NoisyClusterReport::distances_ok)
      .def_readonly("probabilities_ok",
                    &NoisyClusterReport::probabilities_ok);

  m.def(
      "noisy_cluster_experiment",
      [](const Graph& g, int flip_qubit, double p, const Protocol& protocol) {
        return noisy_cluster_experiment(g, flip_qubit, p, protocol);
      },
      py::arg("graph"), py::arg("flip_qubit"), py::arg("p"),
      py::arg("protocol"));

  py::class_<FidelityCheckReport>(m, "FidelityCheckReport")
      .def_readonly("fidelity", &FidelityCheckReport::fidelity)
      .def_readonly("threshold", &FidelityCheckReport::threshold)
      .def_readonly("pass_", &FidelityCheckReport::pass);
  m.def("averaged_fidelity_check", &averaged_fidelity_check, py::arg("tree"),
        py::arg("target"), py::arg("eps"), py::arg("delta"));

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("mu", &StabilityReport::mu)
      .def_readonly("output_distance", &StabilityReport::output_distance)
      .def_readonly("distance_bound", &StabilityReport::distance_bound)
      .def_readonly("measured_fidelity", &StabilityReport::measured_fidelity)
      .def_readonly("pass_", &StabilityReport::pass)
      .def_readonly("frontier", &StabilityReport::frontier);

  py::class_<FrontierPoint>(m, "FrontierPoint")
      .def_readonly("eps_prime", &FrontierPoint::eps_prime)
      .def_readonly("delta_prime", &FrontierPoint::delta_prime);

  m.def("stability_experiment", &stability_experiment, py::arg("base"),
        py::arg("perturbed"), py::arg("protocol"), py::arg("target"),
        py::arg("eps"), py::arg("delta"));
}

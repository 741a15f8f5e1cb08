#include "mbqc/io.hpp"

#include <fstream>

namespace mbqc {

using nlohmann::json;

json state_to_json(const PureState& psi) {
  json amps = json::array();
  for (const complexd& a : psi.amplitudes())
    amps.push_back(json::array({a.real(), a.imag()}));
  return json{{"n", psi.num_qubits()}, {"amplitudes", std::move(amps)}};
}

PureState state_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<complexd> amps;
  for (const json& pair : j.at("amplitudes"))
    amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return PureState(n, std::move(amps));
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  return json{{"vertices", g.num_vertices()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& j) {
  const int n = j.at("vertices").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const json& pair : j.at("edges"))
    edges.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  return Graph(n, std::move(edges));
}

json ensemble_to_json(const Ensemble& rho) {
  json terms = json::array();
  for (const auto& [p, psi] : rho.terms())
    terms.push_back(json{{"p", p}, {"state", state_to_json(psi)}});
  return json{{"terms", std::move(terms)}};
}

Ensemble ensemble_from_json(const json& j) {
  std::vector<Ensemble::Term> terms;
  for (const json& t : j.at("terms"))
    terms.emplace_back(t.at("p").get<double>(),
                       state_from_json(t.at("state")));
  return Ensemble(std::move(terms));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace mbqc

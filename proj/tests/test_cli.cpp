#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mbqc/cli.hpp"
#include "mbqc/io.hpp"
#include "mbqc/locc.hpp"

using namespace mbqc;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json schema_for(const std::string& name) {
  const std::string path = std::string(MBQC_SOURCE_DIR) + "/schemas/mbqc." +
                           name + ".v1.schema.json";
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

void check_schema(const std::string& name, const std::string& payload_text) {
  const json payload = json::parse(payload_text);
  std::string error;
  const bool ok = cli::validate_against_schema(payload, schema_for(name),
                                               &error);
  INFO(error);
  CHECK(ok);
  CHECK(payload.at("schema") == "mbqc." + name + ".v1");
}

}  // namespace

TEST_CASE("eps-bound subcommand") {
  const CliResult r = invoke({"eps-bound", "--formula", "star", "--eta",
                              "1e-3", "--json"});
  REQUIRE(r.code == 0);
  const json payload = json::parse(r.out);
  CHECK(payload["results"]["value"].get<double>() ==
        doctest::Approx(0.634).epsilon(1e-12));
  check_schema("eps-bound", r.out);
}

TEST_CASE("criteria subcommand reproduces the W verdict flip") {
  const CliResult tight = invoke({"criteria", "--family", "w", "--eta",
                                  "1e-3", "--delta", "0", "--measure",
                                  "geometric", "--json"});
  REQUIRE(tight.code == 0);
  CHECK(json::parse(tight.out)["results"]["decision"] == "ruled_out");
  check_schema("criteria", tight.out);

  const CliResult loose = invoke({"criteria", "--family", "w", "--eta",
                                  "1e-2", "--delta", "0", "--json"});
  CHECK(json::parse(loose.out)["results"]["decision"] == "not_ruled_out");

  // --eps maps through the trace-distance eta.
  const CliResult eps = invoke({"criteria", "--family", "w", "--eps", "1e-3",
                                "--delta", "0", "--json"});
  CHECK(json::parse(eps.out)["results"]["eta"].get<double>() ==
        doctest::Approx(1e-3));
}

TEST_CASE("measure subcommand on the W family") {
  const CliResult r = invoke({"measure", "geometric", "--family", "w", "--n",
                              "6", "--json"});
  REQUIRE(r.code == 0);
  const json payload = json::parse(r.out);
  CHECK(payload["results"]["value"].get<double>() ==
        doctest::Approx(1.0 - std::pow(5.0 / 6.0, 5)).epsilon(1e-6));
  check_schema("measure", r.out);

  const CliResult sup = invoke({"measure", "geometric", "--family", "w",
                                "--supremum", "--cap", "8", "--json"});
  REQUIRE(sup.code == 0);
  CHECK(json::parse(sup.out)["results"]["per_size"].size() == 7);
}

TEST_CASE("percolate and deformed subcommands") {
  const CliResult r = invoke({"percolate", "--L", "16", "--p", "0.8",
                              "--trials", "50", "--seed", "7", "--json"});
  REQUIRE(r.code == 0);
  check_schema("percolate", r.out);
  CHECK(json::parse(r.out)["results"]["spanning_probability"].get<double>() >
        0.9);

  const CliResult d = invoke({"deformed", "--lambda", "0.8", "--L", "16",
                              "--samples", "5", "--json"});
  REQUIRE(d.code == 0);
  check_schema("deformed", d.out);
}

TEST_CASE("frontier and w-threshold subcommands") {
  const CliResult f = invoke({"criteria", "frontier", "--mu", "0.01",
                              "--distance", "trace", "--json"});
  REQUIRE(f.code == 0);
  check_schema("frontier", f.out);
  CHECK(invoke({"criteria", "frontier", "--mu", "0.01", "--distance",
                "hamming"})
            .code == 2);
  for (const json& p : json::parse(f.out)["results"]["points"])
    CHECK(p["eps_prime"].get<double>() * 0.0 + p["delta_prime"].get<double>() *
              p["eps_prime"].get<double>() >= 0.01 - 1e-12);

  const CliResult w = invoke({"criteria", "w-threshold", "--json"});
  REQUIRE(w.code == 0);
  check_schema("w-threshold", w.out);
  const double eta =
      json::parse(w.out)["results"]["eta_threshold"].get<double>();
  CHECK(eta > 9.5e-4);
  CHECK(eta < 1.1e-3);
}

TEST_CASE("sweep produces ordered csv") {
  const CliResult r = invoke({"sweep", "eps-star", "--param",
                              "eta=0.001:0.3:20", "--csv"});
  REQUIRE(r.code == 0);
  std::istringstream rows(r.out);
  std::string line;
  std::getline(rows, line);
  CHECK(line == "eta,star_lower");
  double prev = 2.0;
  int count = 0;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    const double v = std::stod(line.substr(comma + 1));
    CHECK(v <= prev + 1e-12);
    prev = v;
    ++count;
  }
  CHECK(count == 20);

  const CliResult refused = invoke({"sweep", "eps-star", "--param",
                                    "eta=0.001:0.3:200000", "--csv"});
  CHECK(refused.code == 2);

  // Frontier sweep traces the constant-product hyperbola.
  const CliResult fr = invoke({"sweep", "frontier", "--mu", "0.2", "--param",
                               "eps-prime=0.2:1.0:9", "--csv"});
  REQUIRE(fr.code == 0);
  std::istringstream frows(fr.out);
  std::getline(frows, line);
  while (std::getline(frows, line)) {
    const auto comma = line.find(',');
    const double ep = std::stod(line.substr(0, comma));
    const double dp = std::stod(line.substr(comma + 1));
    CHECK(ep * dp == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("machine output is byte-identical across runs") {
  const std::vector<std::string> cfg{"percolate", "--L", "16", "--p", "0.6",
                                     "--trials", "80", "--seed", "99",
                                     "--json"};
  const CliResult a = invoke(cfg);
  const CliResult b = invoke(cfg);
  CHECK(a.out == b.out);

  const std::vector<std::string> sweep_cfg{
      "sweep", "percolate", "--param", "p=0.4:0.8:5", "--L", "16",
      "--trials", "40", "--seed", "3", "--csv"};
  CHECK(invoke(sweep_cfg).out == invoke(sweep_cfg).out);
}

TEST_CASE("locc subcommands") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mbqc_cli_test";
  fs::create_directories(dir);
  const RotationProtocol proto =
      chain_rotation_protocol(3, std::array<double, 2>{0.0, 0.8});
  save_json_file((dir / "state.json").string(),
                 state_to_json(make_graph_state(Graph::path(3))));
  save_json_file((dir / "protocol.json").string(),
                 protocol_to_json(proto.protocol));

  const CliResult r = invoke({"locc", "run", "--state",
                              (dir / "state.json").string(), "--protocol",
                              (dir / "protocol.json").string(), "--json"});
  REQUIRE(r.code == 0);
  check_schema("locc-run", r.out);
  const json payload = json::parse(r.out);
  CHECK(payload["results"]["branches"].size() == 4);
  CHECK(payload["results"]["probability_sum"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));

  // Ensemble input files run through the same path.
  save_json_file((dir / "mix.json").string(),
                 ensemble_to_json(Ensemble(
                     {{0.7, make_graph_state(Graph::path(3))},
                      {0.3, apply_pauli(make_graph_state(Graph::path(3)), 1,
                                        Pauli::Z)}})));
  const CliResult mix = invoke({"locc", "run", "--state",
                                (dir / "mix.json").string(), "--protocol",
                                (dir / "protocol.json").string(), "--json"});
  REQUIRE(mix.code == 0);
  const json mix_payload = json::parse(mix.out);
  CHECK(mix_payload["results"]["probability_sum"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mix_payload["results"]["branches"][0]["residual"]["terms"].size() ==
        2);

  const CliResult nc = invoke({"locc", "noisy-cluster", "--n", "4", "--p",
                               "0.2", "--flip", "2", "--json"});
  REQUIRE(nc.code == 0);
  check_schema("noisy-cluster", nc.out);
  CHECK(json::parse(nc.out)["results"]["distances_ok"].get<bool>());

  const CliResult st = invoke({"locc", "stability", "--mu", "0.05",
                               "--trials", "5", "--seed", "3", "--json"});
  REQUIRE(st.code == 0);
  check_schema("stability", st.out);
  CHECK(json::parse(st.out)["results"]["violations"].get<int>() == 0);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"bogus-subcommand"}).code == 2);
  CHECK(invoke({"measure", "geometric", "--family", "nope", "--n", "4"})
            .code == 2);
  CHECK(invoke({"eps-bound", "--formula", "star", "--eta", "1e-3",
                "--bogus-flag"})
            .code == 2);
  CHECK(invoke({"locc", "run", "--state", "/nonexistent.json", "--protocol",
                "/nonexistent.json"})
            .code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("remaining subcommand schemas") {
  const CliResult thr = invoke({"percolate", "threshold", "--L", "16",
                                "--trials", "60", "--seed", "4", "--json"});
  REQUIRE(thr.code == 0);
  check_schema("threshold", thr.out);

  const CliResult sweep = invoke({"sweep", "eps-star", "--param",
                                  "eta=0.01:0.2:5", "--json"});
  REQUIRE(sweep.code == 0);
  check_schema("sweep", sweep.out);

  const CliResult self = invoke({"selftest", "--json"});
  REQUIRE(self.code == 0);
  check_schema("selftest", self.out);
  CHECK(json::parse(self.out)["results"]["all_pass"].get<bool>());
}

TEST_CASE("schema validator rejects malformed payloads") {
  const json schema = schema_for("percolate");
  json payload = {{"schema", "mbqc.percolate.v1"},
                  {"config", json::object()},
                  {"results",
                   {{"p_site", 0.5},
                    {"L", 8},
                    {"trials", 10},
                    {"spanning_probability", 0.4},
                    {"std_error", 0.1},
                    {"seed", 1}}},
                  {"provenance", json::array()}};
  CHECK(cli::validate_against_schema(payload, schema));
  payload["results"].erase("std_error");
  CHECK_FALSE(cli::validate_against_schema(payload, schema));
  payload["results"]["std_error"] = "not-a-number";
  CHECK_FALSE(cli::validate_against_schema(payload, schema));
}

#include <catch_amalgamated.hpp>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "susyhom");
  std::ostringstream out, err;
  const int code = susyhom::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SUSYHOM_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("betti subcommand") {
  auto r = run({"betti", "--graph", fixture("c6.graph"), "--level", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["betti"] == 2);
  r = run({"betti", "--graph", fixture("c6.graph"), "--level", "2", "--method", "spectral"});
  CHECK(r.json()["betti"] == 2);
  r = run({"betti", "--graph", fixture("c4.graph"), "--complex", "clique", "--level", "2"});
  CHECK(r.json()["betti"] == 1);
  r = run({"--convention", "simplicial", "betti", "--graph", fixture("c4.graph"), "--complex", "clique", "--level", "1"});
  CHECK(r.json()["betti"] == 1);
  r = run({"--convention", "simplicial", "betti", "--graph", fixture("c4.graph"), "--complex", "clique", "--level", "0"});
  CHECK(r.json()["betti"] == 1);
}

TEST_CASE("witten and spectrum subcommands") {
  auto r = run({"witten", "--graph", fixture("k3.graph")});
  REQUIRE(r.code == 0);
  CHECK(r.json()["witten"] == -2);
  CHECK(r.json()["dims"] == nlohmann::json::array({1, 3, 0, 0}));
  r = run({"spectrum", "--graph", fixture("p2.graph"), "--level", "1"});
  REQUIRE(r.code == 0);
  const auto ev = r.json()["eigenvalues"];
  REQUIRE(ev.size() == 2);
  CHECK(ev[1].get<double>() == Catch::Approx(2));
  CHECK(r.json()["gap"].get<double>() == Catch::Approx(2));
  r = run({"spectrum", "--graph", fixture("k3.graph"), "--level", "2"});
  CHECK(r.json()["gap"].is_null());
}

TEST_CASE("tda subcommand") {
  auto r = run({"--convention", "simplicial", "tda", "--points", fixture("square.csv"), "--eps", "0.9,1.1,1.5",
                "--max-level", "1"});
  REQUIRE(r.code == 0);
  std::vector<int> b;
  const auto doc = r.json();
  for (const auto& row : doc["rows"]) b.push_back(row["betti"].get<int>());
  CHECK(b == std::vector<int>{4, 0, 1, 1, 1, 0});
  CHECK(run({"tda", "--points", fixture("square.csv"), "--eps", "1.1,0.9", "--max-level", "1"}).code == 1);
  CHECK(run({"tda", "--points", fixture("square.csv"), "--eps", "1.1,x", "--max-level", "1"}).code == 1);
}

TEST_CASE("qbne subcommand") {
  auto r = run({"qbne", "--graph", fixture("c6.graph"), "--level", "2", "--b", "1e-6", "--enumerate", "--t-bits", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["chi"].get<double>() == Catch::Approx(2.0 / 9.0));
  r = run({"qbne", "--graph", fixture("c6.graph"), "--level", "2", "--b", "1e-6", "--seed", "3"});
  CHECK(r.json()["N"] == 600);
  CHECK(r.out == run({"qbne", "--graph", fixture("c6.graph"), "--level", "2", "--b", "1e-6", "--seed", "3"}).out);
  r = run({"qbne", "--graph", fixture("c6.graph"), "--level", "3", "--dqc1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("floor") != std::string::npos);
  CHECK(run({"qbne", "--graph", fixture("c6.graph"), "--level", "2", "--eps", "2"}).code == 1);
}

TEST_CASE("reduce subcommand") {
  auto r = run({"reduce", "--hamiltonian", fixture("two_qubit.pauli"), "--verify-squares"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verify"]["pass"] == true);
  CHECK(r.json()["level"] == 4);
  r = run({"reduce", "--hamiltonian", fixture("z.pauli"), "--variant", "penalty", "--J", "10", "--verify-squares"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["J"] == "10");
  CHECK(run({"reduce", "--hamiltonian", fixture("missing.pauli")}).code == 1);
}

TEST_CASE("vqe subcommand") {
  auto r = run({"vqe", "--graph", fixture("p2.graph"), "--sector", "1", "--restarts", "2", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["energy"].get<double>() <= 1e-4);
  CHECK(r.json()["ansatz"]["layers"] == 2);
}

TEST_CASE("check subcommand") {
  auto r = run({"check", "--graph", fixture("c6.graph")});
  CHECK(r.code == 0);
  CHECK(r.json()["ok"] == true);
  r = run({"check", "--graph", fixture("c4.graph"), "--complex", "clique"});
  CHECK(r.code == 0);
}

TEST_CASE("table output") {
  auto r = run({"--format", "table", "witten", "--graph", fixture("c6.graph")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("witten  2") != std::string::npos);
}

TEST_CASE("errors map to exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"betti", "--graph", fixture("c6.graph")}).code == 1);
  CHECK(run({"--help"}).code == 0);
  auto r = run({"betti", "--graph", fixture("bad.graph"), "--level", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"betti", "--graph", fixture("c6.graph"), "--level", "9"}).code == 1);
  CHECK(run({"--max-modes", "4", "betti", "--graph", fixture("c6.graph"), "--level", "1"}).code == 2);
}

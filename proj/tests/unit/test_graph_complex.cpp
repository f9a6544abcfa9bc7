#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/graph_complex.hpp"

using namespace susyhom;

TEST_CASE("graph construction validates edges") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(Graph::cycle(2), InputError);
  const Graph g(4, {{2, 1}, {0, 1}});
  CHECK(g.edges() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  CHECK(g.adjacent(1, 2));
  CHECK(g.degree(1) == 2);
  CHECK(g.max_degree() == 2);
  CHECK(complement(Graph::complete(4)).edges().empty());
  CHECK(complement(g).edges().size() == 4);
}

TEST_CASE("graph file parsing") {
  std::istringstream ok("# comment\n4\n0 1 # trailing\n\n2 3\n");
  const Graph g = parse_graph(ok);
  CHECK(g.vertices() == 4);
  CHECK(g.edges().size() == 2);
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_graph(in);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("3\n0 1\n1 x\n").find("line 3") != std::string::npos);
  CHECK(message("3\n0 5\n").find("line 2") != std::string::npos);
  CHECK(message("3\n0 1 2\n").find("line 2") != std::string::npos);
  CHECK(message("3\n1 1\n").find("self-loop") != std::string::npos);
  CHECK(message("").find("empty") != std::string::npos);
  CHECK_THROWS_AS(read_graph_file("/nonexistent/graph.txt"), InputError);
}

TEST_CASE("point cloud parsing") {
  std::istringstream ok("0,0\n1, 0.5\n");
  CHECK(parse_point_cloud(ok).size() == 2);
  std::istringstream ragged("0,0\n1\n");
  CHECK_THROWS_AS(parse_point_cloud(ragged), InputError);
  std::istringstream bad("0,zz\n");
  CHECK_THROWS_AS(parse_point_cloud(bad), InputError);
}

TEST_CASE("hard-core supercharge squares to zero symbolically") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(2 + trial % 7, 0.4, rng);
    const FermionOperator d = hardcore_supercharge(g);
    CHECK(compose(d, d).is_zero());
    CHECK(d.grading() == 1);
  }
}

TEST_CASE("hard-core Hamiltonian equals the anticommutator on independent sets") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(2 + trial % 6, 0.45, rng);
    const FermionOperator d = hardcore_supercharge(g);
    const FermionOperator h = hardcore_hamiltonian(g);
    const FermionOperator anti = anticommutator(d, d.adjoint());
    const GradedSpace space = independence_space(g);
    const CochainComplex c = independence_complex(g);
    for (std::size_t l = 0; l <= g.vertices(); ++l) {
      CHECK(sector_matrix(h, space, l) == sector_matrix(anti, space, l));
      CHECK(sector_matrix(h, space, l) == laplacian_exact(c, l));
    }
  }
}

TEST_CASE("supercharge matrix matches the projected Kronecker form") {
  // d on the full Fock space is sum_i a_i^dag prod_{j~i} (1 - n_j).
  const Graph g = Graph::cycle(4);
  const Eigen::MatrixXcd d = oracle::kron_matrix(hardcore_supercharge(g));
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(16, 16);
  for (std::size_t i = 0; i < 4; ++i) {
    Eigen::MatrixXcd term = oracle::kron_matrix(FermionOperator::creation(4, i));
    for (std::size_t j = 0; j < 4; ++j)
      if (g.adjacent(i, j))
        term = term * oracle::kron_matrix(FermionOperator::identity(4) - FermionOperator::number(4, j));
    expect += term;
  }
  CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("clique complexes") {
  SECTION("four-cycle") {
    const CochainComplex c = clique_complex(Graph::cycle(4));
    CHECK(c.dimensions() == std::vector<std::size_t>{1, 4, 4, 0, 0});
    CHECK(betti(c, 2) == 1);
    CHECK(witten_index(c).from_dimensions == 1);
    CHECK(to_simplicial(betti_numbers(c), 4) == std::vector<std::size_t>{1, 1, 0, 0});
  }
  SECTION("triangle is contractible") {
    const CochainComplex c = clique_complex(Graph::complete(3));
    CHECK(betti_numbers(c) == std::vector<std::size_t>{0, 0, 0, 0});
  }
  SECTION("random graphs against simplicial homology") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 30; ++trial) {
      const Graph g = oracle::random_graph(3 + trial % 6, 0.5, rng);
      CHECK(to_simplicial(betti_numbers(clique_complex(g)), g.vertices()) == oracle::clique_betti(g));
    }
  }
}

TEST_CASE("Vietoris-Rips graphs and scans") {
  const PointCloud square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(vietoris_rips(square, 0.9).edges().empty());
  CHECK(vietoris_rips(square, 1.0).edges().size() == 4);
  CHECK(vietoris_rips(square, 1.5).edges().size() == 6);

  const auto rows = betti_scan(square, {0.9, 1.1, 1.5}, 2, BettiConvention::simplicial, 2);
  REQUIRE(rows.size() == 9);
  const std::vector<std::size_t> expect{4, 0, 0, 1, 1, 0, 1, 0, 0};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    REQUIRE(rows[k].betti);
    CHECK(*rows[k].betti == expect[k]);
    CHECK(rows[k].degree == k % 3);
  }
  const auto graded = betti_scan(square, {0.9, 1.1, 1.5}, 2);
  CHECK(*graded[2].betti == 0);
  CHECK(*graded[5].betti == 1);
  CHECK(*graded[8].betti == 0);

  CHECK_THROWS_AS(betti_scan(square, {1.0, 0.5}, 1), InputError);
  CHECK_THROWS_AS(betti_scan(square, {-1.0}, 1), InputError);
}

TEST_CASE("scan rows beyond the cap are marked and the scan continues") {
  const PointCloud pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const auto rows = betti_scan(pts, {0.5, 1.5}, 1, BettiConvention::simplicial, 1, 3);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK_FALSE(r.betti);
    CHECK_FALSE(r.error.empty());
  }
  const auto fine = betti_scan(pts, {0.5, 1.5}, 1, BettiConvention::simplicial, 1, 4);
  CHECK(*fine[0].betti == 4);
  CHECK(*fine[2].betti == 1);
}

TEST_CASE("mode cap applies to graph complexes") {
  CHECK_THROWS_AS(independence_complex(Graph::empty(10), 8), CapExceeded);
}

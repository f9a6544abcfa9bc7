#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "susyhom/cochain.hpp"

namespace susyhom {

// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  // Rejects self-loops, duplicate edges and out-of-range endpoints.
  Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);

  static Graph empty(std::size_t n) { return Graph(n, {}); }
  static Graph complete(std::size_t n);
  static Graph cycle(std::size_t n);
  static Graph path(std::size_t n);

  std::size_t vertices() const { return n_; }
  // Sorted (u < v) edge list.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  bool adjacent(std::size_t u, std::size_t v) const { return (adjacency_.at(u) >> v) & 1U; }
  std::uint64_t neighbours(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const;
  std::size_t max_degree() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::uint64_t> adjacency_;
};

Graph complement(const Graph& g);

// "n" on the first line, then one "u v" per line; '#' starts a comment.
// Errors carry 1-based line numbers.
Graph parse_graph(std::istream& in);
Graph read_graph_file(const std::string& path);

using PointCloud = std::vector<std::vector<double>>;
// One point per line, comma separated coordinates of equal length.
PointCloud parse_point_cloud(std::istream& in);
PointCloud read_point_cloud_file(const std::string& path);

// Fock space whose allowed states are the independent sets of g.
GradedSpace independence_space(const Graph& g, std::size_t cap = default_mode_cap());
// d = sum_i a_i^dag prod_{j ~ i} (1 - n_j), expanded into monomials.
FermionOperator hardcore_supercharge(const Graph& g);
// sum over ordered edges of P_i a_i^dag a_j P_j plus sum_i P_i.
FermionOperator hardcore_hamiltonian(const Graph& g);

CochainComplex independence_complex(const Graph& g, std::size_t cap = default_mode_cap());
// Clique complex of g, realised as the independence complex of its complement.
CochainComplex clique_complex(const Graph& g, std::size_t cap = default_mode_cap());

// Edge i-j iff the Euclidean distance is at most eps.
Graph vietoris_rips(const PointCloud& points, double eps);

// fermion_number: beta_l of the graded complex (reduced simplicial Betti
// numbers shifted up by one). simplicial: ordinary Betti numbers b_k with
// k = l - 1 and the reduced-to-unreduced correction in degree 0.
enum class BettiConvention { fermion_number, simplicial };

// Converts a fermion-number Betti vector of a complex on n vertices.
std::vector<std::size_t> to_simplicial(const std::vector<std::size_t>& fermion_betti, std::size_t vertices);

struct ScanRow {
  double eps = 0;
  std::size_t degree = 0;
  std::optional<std::size_t> betti;  // empty when the scale hit a cap
  std::string error;
};

// Betti numbers of the Rips clique complex for each eps (non-decreasing) and
// degree 0..max_degree in the chosen convention.
std::vector<ScanRow> betti_scan(const PointCloud& points, const std::vector<double>& eps, std::size_t max_degree,
                                BettiConvention convention = BettiConvention::fermion_number, unsigned workers = 1,
                                std::size_t cap = default_mode_cap());

}  // namespace susyhom

#include "susyhom/graph_complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "susyhom/errors.hpp"
#include "susyhom/parallel.hpp"

namespace susyhom {

Graph::Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) : n_(n), adjacency_(n, 0) {
  if (n > kMaxModes) throw InputError("at most 64 vertices are supported");
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") references a vertex >= " +
                       std::to_string(n));
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (adjacency_[u] >> v & 1U)
      throw InputError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    adjacency_[u] |= std::uint64_t{1} << v;
    adjacency_[v] |= std::uint64_t{1} << u;
  }
  std::sort(edges.begin(), edges.end());
  edges_ = std::move(edges);
}

Graph Graph::complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

Graph Graph::cycle(std::size_t n) {
  if (n < 3) throw InputError("a cycle needs at least 3 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
  return Graph(n, std::move(e));
}

Graph Graph::path(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph(n, std::move(e));
}

std::size_t Graph::degree(std::size_t v) const { return static_cast<std::size_t>(std::popcount(adjacency_.at(v))); }

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (std::size_t v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

Graph complement(const Graph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < g.vertices(); ++u)
    for (std::size_t v = u + 1; v < g.vertices(); ++v)
      if (!g.adjacent(u, v)) e.emplace_back(u, v);
  return Graph(g.vertices(), std::move(e));
}

namespace {

std::string strip_comment(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
  return line;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::size_t parse_index(std::istringstream& ls, std::size_t line_no, const char* what) {
  long long v = 0;
  if (!(ls >> v)) throw InputError("line " + std::to_string(line_no) + ": expected " + what);
  if (v < 0) throw InputError("line " + std::to_string(line_no) + ": negative " + what);
  return static_cast<std::size_t>(v);
}

void expect_end(std::istringstream& ls, std::size_t line_no) {
  std::string extra;
  if (ls >> extra) throw InputError("line " + std::to_string(line_no) + ": unexpected token '" + extra + "'");
}

}  // namespace

Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    if (!n) {
      n = parse_index(ls, line_no, "vertex count");
      expect_end(ls, line_no);
      if (*n > kMaxModes) throw InputError("line " + std::to_string(line_no) + ": at most 64 vertices are supported");
      continue;
    }
    std::size_t u = parse_index(ls, line_no, "edge endpoint");
    std::size_t v = parse_index(ls, line_no, "edge endpoint");
    expect_end(ls, line_no);
    try {
      if (u >= *n || v >= *n) throw InputError("vertex out of range (n = " + std::to_string(*n) + ")");
      if (u == v) throw InputError("self-loop");
      for (const auto& e : edges)
        if ((e.first == u && e.second == v) || (e.first == v && e.second == u)) throw InputError("duplicate edge");
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    edges.emplace_back(u, v);
  }
  if (!n) throw InputError("graph file is empty");
  return Graph(*n, std::move(edges));
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  try {
    return parse_graph(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

PointCloud parse_point_cloud(std::istream& in) {
  PointCloud points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::vector<double> p;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (!blank(cell.substr(used)) || !std::isfinite(v)) throw std::invalid_argument(cell);
        p.push_back(v);
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": bad coordinate '" + cell + "'");
      }
    }
    if (!points.empty() && p.size() != points.front().size())
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(points.front().size()) +
                       " coordinates, found " + std::to_string(p.size()));
    points.push_back(std::move(p));
  }
  return points;
}

PointCloud read_point_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open point file '" + path + "'");
  try {
    return parse_point_cloud(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

GradedSpace independence_space(const Graph& g, std::size_t cap) {
  if (g.vertices() > cap)
    throw CapExceeded("graph has " + std::to_string(g.vertices()) + " vertices, above the mode cap of " +
                      std::to_string(cap));
  std::vector<std::vector<std::size_t>> forbidden;
  for (const auto& [u, v] : g.edges()) forbidden.push_back({u, v});
  return GradedSpace(g.vertices(), ConstraintSet(std::move(forbidden)), cap);
}

namespace {

std::vector<std::size_t> bits_of(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (; mask; mask &= mask - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  return out;
}

// prefix * prod_{k in modes} (1 - n_k), expanded over subsets.
void append_projected(std::vector<FermionTerm>& products, const std::vector<Factor>& prefix,
                      const std::vector<std::size_t>& modes) {
  const std::size_t count = std::size_t{1} << modes.size();
  for (std::size_t subset = 0; subset < count; ++subset) {
    FermionTerm t{ExactComplex(std::popcount(subset) % 2 ? -1 : 1), prefix};
    for (std::size_t b = 0; b < modes.size(); ++b)
      if (subset >> b & 1U) {
        t.factors.push_back(Factor::create(modes[b]));
        t.factors.push_back(Factor::annihilate(modes[b]));
      }
    products.push_back(std::move(t));
  }
}

}  // namespace

FermionOperator hardcore_supercharge(const Graph& g) {
  std::vector<FermionTerm> products;
  for (std::size_t i = 0; i < g.vertices(); ++i)
    append_projected(products, {Factor::create(i)}, bits_of(g.neighbours(i)));
  return FermionOperator(g.vertices(), products);
}

FermionOperator hardcore_hamiltonian(const Graph& g) {
  std::vector<FermionTerm> products;
  for (std::size_t i = 0; i < g.vertices(); ++i) append_projected(products, {}, bits_of(g.neighbours(i)));
  for (const auto& [u, v] : g.edges()) {
    for (auto [i, j] : {std::pair{u, v}, std::pair{v, u}}) {
      // P_i a_i^dag a_j P_j: the (1 - n_j) in P_i and (1 - n_i) in P_j act
      // as identities next to the hop, the rest commute past it.
      const std::uint64_t others = (g.neighbours(i) | g.neighbours(j)) & ~((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
      append_projected(products, {Factor::create(i), Factor::annihilate(j)}, bits_of(others));
    }
  }
  return FermionOperator(g.vertices(), products);
}

CochainComplex independence_complex(const Graph& g, std::size_t cap) {
  return CochainComplex(independence_space(g, cap), hardcore_supercharge(g));
}

CochainComplex clique_complex(const Graph& g, std::size_t cap) { return independence_complex(complement(g), cap); }

Graph vietoris_rips(const PointCloud& points, double eps) {
  if (!(eps >= 0) || !std::isfinite(eps)) throw InputError("scale must be finite and non-negative");
  if (points.size() > kMaxModes) throw InputError("at most 64 points are supported");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != points.front().size()) throw InputError("points have mismatched dimensions");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[j].size() != points[i].size()) throw InputError("points have mismatched dimensions");
      double d2 = 0;
      for (std::size_t k = 0; k < points[i].size(); ++k) d2 += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
      if (std::sqrt(d2) <= eps) e.emplace_back(i, j);
    }
  }
  return Graph(points.size(), std::move(e));
}

std::vector<std::size_t> to_simplicial(const std::vector<std::size_t>& fermion_betti, std::size_t vertices) {
  std::vector<std::size_t> out;
  for (std::size_t l = 1; l < fermion_betti.size(); ++l) out.push_back(fermion_betti[l]);
  if (vertices > 0 && !out.empty()) out[0] += 1;
  return out;
}

std::vector<ScanRow> betti_scan(const PointCloud& points, const std::vector<double>& eps, std::size_t max_degree,
                                BettiConvention convention, unsigned workers, std::size_t cap) {
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (eps[i] < eps[i - 1]) throw InputError("scales must be non-decreasing");
  for (double e : eps)
    if (!(e >= 0) || !std::isfinite(e)) throw InputError("scales must be finite and non-negative");
  if (points.empty()) return {};
  const std::size_t n = points.size();
  std::vector<std::vector<ScanRow>> rows(eps.size());
  parallel_for(eps.size(), workers, [&](std::size_t s) {
    auto& out = rows[s];
    for (std::size_t k = 0; k <= max_degree; ++k) out.push_back({eps[s], k, std::nullopt, {}});
    try {
      CochainComplex c = clique_complex(vietoris_rips(points, eps[s]), cap);
      for (std::size_t k = 0; k <= max_degree; ++k) {
        const std::size_t l = convention == BettiConvention::simplicial ? k + 1 : k;
        std::size_t b = l <= n ? betti(c, l) : 0;
        if (convention == BettiConvention::simplicial && k == 0) b += 1;
        out[k].betti = b;
      }
    } catch (const CapExceeded& e) {
      for (auto& r : out) r.error = e.what();
    }
  });
  std::vector<ScanRow> flat;
  for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return flat;
}

}  // namespace susyhom

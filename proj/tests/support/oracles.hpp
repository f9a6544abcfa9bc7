#pragma once

// Test-side reference implementations. Nothing here calls into the solver
// paths they check: sets are enumerated by brute force, ranks come from
// dense rational elimination, operators become Kronecker products.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "susyhom/graph_complex.hpp"
#include "susyhom/operators.hpp"

namespace oracle {

using Q = boost::multiprecision::mpq_rational;
using QMatrix = std::vector<std::vector<Q>>;

inline susyhom::Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) e.emplace_back(i, j);
  return susyhom::Graph(n, e);
}

// Every labelled graph on n vertices (n <= 5 keeps this at 1024).
inline std::vector<susyhom::Graph> all_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::vector<susyhom::Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if ((mask >> k) & 1U) e.push_back(slots[k]);
    out.emplace_back(n, e);
  }
  return out;
}

inline bool independent(const susyhom::Graph& g, std::uint64_t set) {
  for (const auto& [u, v] : g.edges())
    if (((set >> u) & 1U) && ((set >> v) & 1U)) return false;
  return true;
}

// Independent sets grouped by size, each group in increasing word order.
inline std::vector<std::vector<std::uint64_t>> independent_sets(const susyhom::Graph& g) {
  const std::size_t n = g.vertices();
  std::vector<std::vector<std::uint64_t>> out(n + 1);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (independent(g, s)) out[std::popcount(s)].push_back(s);
  return out;
}

inline std::vector<std::size_t> independent_counts(const susyhom::Graph& g) {
  std::vector<std::size_t> out;
  for (const auto& level : independent_sets(g)) out.push_back(level.size());
  return out;
}

inline std::size_t rank(QMatrix m) {
  std::size_t r = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

// Simplicial boundary d_k : C_k -> C_{k-1} of a complex given by its faces
// (vertex bitsets of size k+1 and k). The augmentation is the k = 0 case
// with C_{-1} spanned by the empty face.
inline QMatrix boundary(const std::vector<std::uint64_t>& faces, const std::vector<std::uint64_t>& lower) {
  QMatrix m(lower.size(), std::vector<Q>(faces.size()));
  for (std::size_t j = 0; j < faces.size(); ++j) {
    int pos = 0;
    for (std::uint64_t rest = faces[j]; rest; rest &= rest - 1, ++pos) {
      const std::uint64_t v = rest & (~rest + 1);
      const auto it = std::lower_bound(lower.begin(), lower.end(), faces[j] ^ v);
      if (it != lower.end() && *it == (faces[j] ^ v)) m[it - lower.begin()][j] = (pos % 2) ? -1 : 1;
    }
  }
  return m;
}

// Reduced Betti numbers of the independence complex indexed by face size
// (entry l is reduced b_{l-1}; entry 0 is 1 only for the void complex).
inline std::vector<std::size_t> reduced_betti_by_size(const susyhom::Graph& g) {
  const auto sets = independent_sets(g);
  const std::size_t n = g.vertices();
  std::vector<std::size_t> ranks(n + 2, 0);  // ranks[l] = rank of C_l-size -> C_{l-1}-size
  for (std::size_t l = 1; l <= n; ++l)
    if (!sets[l].empty()) ranks[l] = rank(boundary(sets[l], sets[l - 1]));
  std::vector<std::size_t> out(n + 1);
  for (std::size_t l = 0; l <= n; ++l) out[l] = sets[l].size() - ranks[l] - ranks[l + 1];
  return out;
}

// Ordinary Betti numbers b_0..b_{n-1} of the clique complex of g.
inline std::vector<std::size_t> clique_betti(const susyhom::Graph& g) {
  auto reduced = reduced_betti_by_size(susyhom::complement(g));
  std::vector<std::size_t> out(reduced.begin() + 1, reduced.end());
  if (g.vertices() > 0) out[0] += 1;
  return out;
}

// Full 2^m matrix of a fermion operator from Kronecker products
// Z x .. x Z x sigma x I x .. x I, qubit q on bit q of the index.
inline Eigen::MatrixXcd kron_matrix(const susyhom::FermionOperator& op) {
  const std::size_t m = op.modes();
  const Eigen::Index dim = Eigen::Index{1} << m;
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), z, raise;
  z << 1, 0, 0, -1;
  raise << 0, 0, 1, 0;  // |1><0|
  auto ladder = [&](std::size_t i, bool create) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    // Kronecker order: highest qubit leftmost.
    for (std::size_t q = m; q-- > 0;) {
      Eigen::Matrix2cd f = q < i ? z : (q == i ? (create ? raise : Eigen::Matrix2cd(raise.adjoint())) : id);
      Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
      for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
      out = next;
    }
    return out;
  };
  // Each ladder has one entry per column, so products stay cheap in sparse form.
  using Sparse = Eigen::SparseMatrix<std::complex<double>>;
  std::vector<Sparse> cache(2 * m);
  std::vector<bool> built(2 * m, false);
  auto sparse_ladder = [&](std::size_t i, bool create) -> const Sparse& {
    const std::size_t k = 2 * i + (create ? 1 : 0);
    if (!built[k]) {
      cache[k] = ladder(i, create).sparseView();
      built[k] = true;
    }
    return cache[k];
  };
  Sparse sum(dim, dim);
  for (const auto& t : op.terms()) {
    Sparse prod(dim, dim);
    prod.setIdentity();
    for (const auto& f : t.factors) prod = (prod * sparse_ladder(f.mode, f.creation)).pruned();
    sum += t.coefficient.to_complex() * prod;
  }
  const Eigen::MatrixXcd total(sum);
  return total * op.scale();
}

inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

inline double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return 1e300;
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// Upper-tail p-value of Pearson's statistic against equal expected counts.
inline double chi_square_uniform_p(const std::vector<std::size_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Pauli matrices as Kronecker products; bit q of the index is qubit q.
inline Eigen::MatrixXcd pauli_kron(const std::vector<char>& letters) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = letters.size(); q-- > 0;) {
    Eigen::Matrix2cd f;
    switch (letters[q]) {
      case 'X': f << 0, 1, 1, 0; break;
      case 'Y': f << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0; break;
      case 'Z': f << 1, 0, 0, -1; break;
      default: f = Eigen::Matrix2cd::Identity();
    }
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
    out = next;
  }
  return out;
}

}  // namespace oracle

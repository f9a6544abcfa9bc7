#include "susyhom/qubit.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "susyhom/errors.hpp"

namespace susyhom {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

std::complex<double> i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return 1.0;
    case 1:
      return kI;
    case 2:
      return -1.0;
    default:
      return -kI;
  }
}

// Index 0..3 for I, X, Y, Z.
int letter_index(bool x, bool z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); }

}  // namespace

PauliString PauliString::single(std::size_t q, char letter) {
  if (q >= kMaxModes) throw InputError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << q;
  switch (letter) {
    case 'I':
      return {};
    case 'X':
      return {bit, 0};
    case 'Y':
      return {bit, bit};
    case 'Z':
      return {0, bit};
    default:
      throw InputError(std::string("unknown Pauli letter '") + letter + "'");
  }
}

char PauliString::letter(std::size_t q) const { return "IXYZ"[letter_index((x >> q) & 1U, (z >> q) & 1U)]; }

std::size_t PauliString::weight() const { return static_cast<std::size_t>(std::popcount(x | z)); }

bool PauliString::commutes_with(const PauliString& o) const {
  return ((std::popcount(x & o.z) + std::popcount(z & o.x)) & 1) == 0;
}

std::string PauliString::to_string() const {
  if (is_identity()) return "I";
  std::string s;
  for (std::uint64_t m = x | z; m; m &= m - 1) {
    const auto q = static_cast<std::size_t>(std::countr_zero(m));
    if (!s.empty()) s += ' ';
    s += letter(q);
    s += std::to_string(q);
  }
  return s;
}

std::pair<std::complex<double>, PauliString> multiply(const PauliString& p, const PauliString& q) {
  // Single-qubit products: phase exponent of i for (a, b) in {I, X, Y, Z}.
  static constexpr int kPhase[4][4] = {{0, 0, 0, 0}, {0, 0, 1, 3}, {0, 3, 0, 1}, {0, 1, 3, 0}};
  int k = 0;
  for (std::uint64_t m = (p.x | p.z) & (q.x | q.z); m; m &= m - 1) {
    const auto b = static_cast<std::size_t>(std::countr_zero(m));
    k += kPhase[letter_index((p.x >> b) & 1U, (p.z >> b) & 1U)][letter_index((q.x >> b) & 1U, (q.z >> b) & 1U)];
  }
  return {i_power(k), PauliString{p.x ^ q.x, p.z ^ q.z}};
}

void QubitOperator::add(const PauliString& p, std::complex<double> c) {
  if (qubits_ < 64 && ((p.x | p.z) >> qubits_) != 0) throw InputError("Pauli string exceeds the qubit count");
  terms_[p] += c;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& o) {
  if (o.qubits_ != qubits_) throw InputError("qubit operators act on different registers");
  for (const auto& [p, c] : o.terms_) terms_[p] += c;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  if (a.qubits_ != b.qubits_) throw InputError("qubit operators act on different registers");
  QubitOperator out(a.qubits_);
  for (const auto& [p, c] : a.terms_)
    for (const auto& [q, d] : b.terms_) {
      auto [phase, r] = multiply(p, q);
      out.terms_[r] += phase * c * d;
    }
  out.prune();
  return out;
}

QubitOperator QubitOperator::scaled(std::complex<double> c) const {
  QubitOperator out(qubits_);
  for (const auto& [p, v] : terms_) out.terms_[p] = v * c;
  out.prune();
  return out;
}

void QubitOperator::prune(double tol) {
  std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) <= tol; });
}

bool QubitOperator::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_)
    if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
  return true;
}

bool QubitOperator::is_commuting() const {
  for (auto a = terms_.begin(); a != terms_.end(); ++a)
    for (auto b = std::next(a); b != terms_.end(); ++b)
      if (!a->first.commutes_with(b->first)) return false;
  return true;
}

namespace {

// P|x> = i^{#Y} (-1)^{|x & z|} |x ^ xmask>.
std::complex<double> pauli_phase(const PauliString& p, std::uint64_t basis) {
  std::complex<double> ph = i_power(std::popcount(p.x & p.z));
  return (std::popcount(basis & p.z) & 1) ? -ph : ph;
}

}  // namespace

DenseMatrix QubitOperator::matrix() const {
  if (qubits_ > 12) throw CapExceeded("dense qubit matrix limited to 12 qubits");
  const std::size_t dim = std::size_t{1} << qubits_;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : terms_)
    for (std::uint64_t b = 0; b < dim; ++b)
      m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += c * pauli_phase(p, b);
  return m;
}

Statevector QubitOperator::apply(const Statevector& psi) const {
  if (qubits_ > kStatevectorCap) throw CapExceeded("statevector limited to 20 qubits");
  const std::size_t dim = std::size_t{1} << qubits_;
  if (static_cast<std::size_t>(psi.size()) != dim) throw InputError("statevector has the wrong length");
  Statevector out = Statevector::Zero(psi.size());
  for (const auto& [p, c] : terms_)
    for (std::uint64_t b = 0; b < dim; ++b) {
      const auto in = psi[static_cast<Eigen::Index>(b)];
      if (in == 0.0) continue;
      out[static_cast<Eigen::Index>(b ^ p.x)] += c * pauli_phase(p, b) * in;
    }
  return out;
}

double QubitOperator::expectation(const Statevector& psi) const { return psi.dot(apply(psi)).real(); }

QubitOperator jordan_wigner(const FermionOperator& op) {
  const std::size_t n = op.modes();
  const double scale = op.scale();
  QubitOperator out(n);
  for (const auto& t : op.terms()) {
    QubitOperator prod(n);
    prod.add({}, t.coefficient.to_complex() * scale);
    for (const auto& f : t.factors) {
      const std::uint64_t below = (std::uint64_t{1} << f.mode) - 1;
      const std::uint64_t bit = std::uint64_t{1} << f.mode;
      QubitOperator image(n);
      // a^dag -> (X - iY)/2 Z_<i ;  a -> (X + iY)/2 Z_<i
      image.add({bit, below}, 0.5);
      image.add({bit, below | bit}, f.creation ? -0.5 * kI : 0.5 * kI);
      prod = prod * image;
    }
    out += prod;
  }
  out.prune();
  return out;
}

QubitOperator FactoredTerm::expand() const {
  QubitOperator out = core;
  for (std::size_t j : zero_projectors) {
    QubitOperator proj(core.qubits());
    proj.add({}, 0.5);
    proj.add(PauliString::single(j, 'Z'), 0.5);
    out = out * proj;
  }
  return out;
}

QubitOperator FactoredOperator::expand() const {
  QubitOperator out(qubits);
  for (const auto& t : terms) out += t.expand();
  out.prune();
  return out;
}

namespace {

std::vector<std::size_t> neighbour_list(const Graph& g, std::size_t v, std::uint64_t exclude = 0) {
  std::vector<std::size_t> out;
  for (std::uint64_t m = g.neighbours(v) & ~exclude; m; m &= m - 1)
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

}  // namespace

FactoredOperator jw_dirac(const Graph& g) {
  FactoredOperator out{g.vertices(), {}};
  for (std::size_t i = 0; i < g.vertices(); ++i) {
    FactoredTerm t{QubitOperator(g.vertices()), neighbour_list(g, i)};
    t.core.add({std::uint64_t{1} << i, (std::uint64_t{1} << i) - 1}, 1.0);
    out.terms.push_back(std::move(t));
  }
  return out;
}

FactoredOperator jw_laplacian(const Graph& g) {
  const std::size_t n = g.vertices();
  FactoredOperator out{n, {}};
  for (const auto& [i, j] : g.edges()) {
    const std::uint64_t ends = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
    const std::uint64_t between = ((std::uint64_t{1} << j) - 1) & ~((std::uint64_t{1} << (i + 1)) - 1);
    std::vector<std::size_t> proj;
    for (std::uint64_t m = (g.neighbours(i) | g.neighbours(j)) & ~ends; m; m &= m - 1)
      proj.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    FactoredTerm t{QubitOperator(n), std::move(proj)};
    t.core.add({ends, between}, 0.5);         // X_i X_j Z...
    t.core.add({ends, ends | between}, 0.5);  // Y_i Y_j Z...
    out.terms.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < n; ++i) {
    FactoredTerm t{QubitOperator(n), neighbour_list(g, i)};
    t.core.add({}, 1.0);
    out.terms.push_back(std::move(t));
  }
  return out;
}

namespace {

std::vector<QubitOperator> colour(const QubitOperator& op) {
  std::vector<std::pair<PauliString, std::complex<double>>> items(op.terms().begin(), op.terms().end());
  const std::size_t n = items.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!items[a].first.commutes_with(items[b].first)) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });
  std::vector<long> colour_of(n, -1);
  std::size_t colours = 0;
  for (std::size_t v : order) {
    std::vector<bool> used(colours + 1, false);
    for (std::size_t u : adj[v])
      if (colour_of[u] >= 0) used[static_cast<std::size_t>(colour_of[u])] = true;
    std::size_t c = 0;
    while (used[c]) ++c;
    colour_of[v] = static_cast<long>(c);
    colours = std::max(colours, c + 1);
  }
  std::vector<QubitOperator> groups(colours, QubitOperator(op.qubits()));
  for (std::size_t v = 0; v < n; ++v) groups[static_cast<std::size_t>(colour_of[v])].add(items[v].first, items[v].second);
  return groups;
}

}  // namespace

std::vector<QubitOperator> commuting_groups(const FactoredOperator& op, GroupingStrategy strategy) {
  if (strategy == GroupingStrategy::greedy_coloring) return colour(op.expand());
  std::vector<QubitOperator> groups;
  for (const auto& t : op.terms) {
    QubitOperator e = t.expand();
    if (e.size() == 0) continue;
    if (e.is_commuting()) {
      groups.push_back(std::move(e));
    } else {
      for (auto& g : colour(e)) groups.push_back(std::move(g));
    }
  }
  return groups;
}

std::vector<QubitOperator> commuting_groups(const QubitOperator& op, GroupingStrategy strategy) {
  if (strategy == GroupingStrategy::greedy_coloring) return colour(op);
  std::vector<QubitOperator> groups;
  for (const auto& [p, c] : op.terms()) {
    QubitOperator g(op.qubits());
    g.add(p, c);
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace susyhom

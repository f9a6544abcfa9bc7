#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "susyhom/exact_matrix.hpp"
#include "susyhom/graph_complex.hpp"
#include "susyhom/operators.hpp"

namespace susyhom {

// Tensor product of single-qubit Paulis: X where only x is set, Z where only
// z is set, Y where both are set.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString single(std::size_t q, char letter);
  char letter(std::size_t q) const;
  bool is_identity() const { return x == 0 && z == 0; }
  std::size_t weight() const;
  bool commutes_with(const PauliString& o) const;
  // "X0 Z3"; "I" for the identity.
  std::string to_string() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

// Product p * q = phase * r.
std::pair<std::complex<double>, PauliString> multiply(const PauliString& p, const PauliString& q);

using Statevector = Eigen::VectorXcd;

// Cap on qubits for statevector simulation.
inline constexpr std::size_t kStatevectorCap = 20;

class QubitOperator {
 public:
  explicit QubitOperator(std::size_t qubits = 0) : qubits_(qubits) {}

  std::size_t qubits() const { return qubits_; }
  const std::map<PauliString, std::complex<double>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const PauliString& p, std::complex<double> c);
  QubitOperator& operator+=(const QubitOperator& o);
  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);
  QubitOperator scaled(std::complex<double> c) const;
  // Drops terms with |c| <= tol.
  void prune(double tol = 1e-14);

  bool is_hermitian(double tol = 1e-12) const;
  bool is_commuting() const;
  DenseMatrix matrix() const;
  // H|psi> on a 2^n statevector (bit q of the index is qubit q).
  Statevector apply(const Statevector& psi) const;
  double expectation(const Statevector& psi) const;

 private:
  std::size_t qubits_;
  std::map<PauliString, std::complex<double>> terms_;
};

// a_i^dag -> 1/2 (X_i - i Y_i) Z_0 ... Z_{i-1}, qubit value 1 = occupied.
// The operator's symbolic scale is folded into the coefficients.
QubitOperator jordan_wigner(const FermionOperator& op);

// coefficient * core * prod_{j in zero_projectors} |0><0|_j.
struct FactoredTerm {
  QubitOperator core;
  std::vector<std::size_t> zero_projectors;
  QubitOperator expand() const;
};

// Sum of top-level factored terms, kept unexpanded for term counting.
struct FactoredOperator {
  std::size_t qubits = 0;
  std::vector<FactoredTerm> terms;
  QubitOperator expand() const;
};

// B-hat = sum_i X_i Z_0..Z_{i-1} prod_{j ~ i} |0><0|_j.
FactoredOperator jw_dirac(const Graph& g);
// Hard-core Hamiltonian: one hopping term 1/2 (X_i X_j + Y_i Y_j) Z_{i+1}..Z_{j-1}
// per edge with the joint neighbourhood projector, plus one projector per
// vertex.
FactoredOperator jw_laplacian(const Graph& g);

enum class GroupingStrategy { per_term, greedy_coloring };

// Partition into groups of mutually commuting Pauli strings. per_term keeps
// one group per top-level term (splitting any that fail to commute);
// greedy_coloring colours the anticommutation graph of the expanded strings
// in descending-degree order with lowest-index tie-break.
std::vector<QubitOperator> commuting_groups(const FactoredOperator& op, GroupingStrategy strategy);
std::vector<QubitOperator> commuting_groups(const QubitOperator& op, GroupingStrategy strategy);

}  // namespace susyhom

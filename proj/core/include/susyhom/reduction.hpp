#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "susyhom/cochain.hpp"

namespace susyhom {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

struct PauliTerm {
  double coefficient = 0;
  std::map<std::size_t, Pauli> ops;  // qubit -> Pauli; empty means identity
};

// Real combination of Pauli strings on n qubits.
class PauliHamiltonian {
 public:
  PauliHamiltonian() = default;
  PauliHamiltonian(std::size_t qubits, std::vector<PauliTerm> terms);

  std::size_t qubits() const { return qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t locality() const;
  double one_norm() const;
  // Dense 2^n matrix; bit q of the basis index is qubit q.
  DenseMatrix matrix() const;

 private:
  std::size_t qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

// Lines "coef P q [P q ...]" or "coef I". The qubit count is the largest
// index + 1 unless given.
PauliHamiltonian parse_pauli_hamiltonian(std::istream& in, std::optional<std::size_t> qubits = std::nullopt);
PauliHamiltonian read_pauli_file(const std::string& path, std::optional<std::size_t> qubits = std::nullopt);

// Site s of a dual-rail register uses modes a_s = 2s and b_s = 2s + 1;
// qubit value 0 occupies a, value 1 occupies b. Lifted complexes put the
// qubits on sites 1..n and keep site 0 as the auxiliary pair.
FockState dualrail_encode(const std::vector<int>& bits, std::size_t site_offset = 0);

// sigma+ -> a^dag b, sigma- -> b^dag a, Z -> a^dag a - b^dag b, on 2(n+offset)
// modes with qubit q on site q + offset.
FermionOperator pauli_to_fermion(const PauliHamiltonian& a, std::size_t site_offset = 0);

// J * sum_s [n_a n_b + (n_a - 1)(n_b - 1)] over `sites` sites starting at
// first_site.
FermionOperator penalty(std::size_t sites, const Rational& j, std::size_t first_site = 0);
Rational default_penalty_strength(const PauliHamiltonian& a);

// A-hat + penalty on the qubit sites of a lifted register.
FermionOperator lifted_bosonic_part(const PauliHamiltonian& a, const Rational& j);

// d = (a_0^dag + b_0^dag)/sqrt 2 * (A-hat + penalty) on 2(n+1) free modes.
CochainComplex susy_lift(const PauliHamiltonian& a, std::optional<Rational> j = std::nullopt,
                         std::size_t cap = default_mode_cap());

struct LiftedComplex {
  CochainComplex complex;
  std::size_t level;  // sector where Delta reproduces A^2
};

// d = (a_0^dag + b_0^dag)/sqrt 2 * A-hat with double occupation of every
// qubit site forbidden; Delta^{n+2} is A^2 on the doubly filled auxiliary site.
LiftedComplex constrained_lift(const PauliHamiltonian& a, std::size_t cap = default_mode_cap());

// Constrained lift of sum_S Pi_S; each Pi_S must satisfy Pi^2 = Pi.
LiftedComplex ksat_complex(const std::vector<PauliHamiltonian>& projectors, std::size_t cap = default_mode_cap());

struct SquaredSpectrumCheck {
  bool pass = false;
  double max_deviation = 0;
  std::vector<double> laplacian_spectrum;
  std::vector<double> expected;  // sorted squares of spec(A)
};
SquaredSpectrumCheck verify_squared_spectrum(const PauliHamiltonian& a, const CochainComplex& c, std::size_t l,
                                             double tol = 1e-8);

}  // namespace susyhom

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "susyhom/qubit.hpp"

namespace susyhom {

// prod_layers prod_j exp(i t_{layer,j} H_j) applied to a basis state. Each
// H_j must be a Hermitian sum of mutually commuting Pauli strings.
struct AnsatzSpec {
  std::vector<QubitOperator> groups;
  std::size_t layers = 1;
  std::vector<double> params;  // layer-major, layers * groups.size()
  std::uint64_t seed = 0;

  std::size_t parameter_count() const { return layers * groups.size(); }
  // Throws InputError on shape, Hermiticity or commutation violations.
  void validate() const;
};

std::string to_json(const AnsatzSpec& spec);
AnsatzSpec ansatz_from_json(const std::string& json);

// Lowest-index basis state of sector l.
std::uint64_t initial_sector_state(const GradedSpace& space, std::size_t l);

Statevector basis_state(std::size_t qubits, std::uint64_t index);
Statevector ansatz_state(const AnsatzSpec& spec, std::size_t qubits, std::uint64_t initial);

enum class Optimizer { coordinate_descent, nelder_mead };

struct VqeOptions {
  std::size_t layers = 2;
  Optimizer optimizer = Optimizer::coordinate_descent;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  std::size_t max_sweeps = 60;
  double tolerance = 1e-12;  // stop when a sweep improves less than this
  unsigned workers = 1;
};

struct VqeResult {
  double energy = 0;
  std::vector<double> params;
  std::size_t best_restart = 0;
  std::vector<double> restart_energies;
  // Best-so-far energy after every objective evaluation of the best restart.
  std::vector<double> trace;
  bool stagnated = false;  // hit max_sweeps without meeting the tolerance
  std::size_t evaluations = 0;
};

// Minimises <psi(t)|H|psi(t)> from `initial`; restarts perturb the parameters
// only and use independent seeded streams.
VqeResult vqe_run(const QubitOperator& h, const std::vector<QubitOperator>& groups, std::uint64_t initial,
                  const VqeOptions& options);

}  // namespace susyhom

#pragma once

#include <cstddef>
#include <vector>

#include "susyhom/exact_matrix.hpp"

namespace susyhom {

inline constexpr std::size_t kDenseCap = 4096;
inline constexpr double kHermitianTol = 1e-12;

// max |M - M^dagger| relative to max(1, max |M|).
double hermiticity_residual(const DenseMatrix& m);
double one_norm(const DenseMatrix& m);
double one_norm(const SparseMatrix& m);

struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  DenseMatrix vectors;     // columns
};

// Dense Hermitian eigensolver; rejects non-Hermitian input and dimensions
// above kDenseCap. Real-symmetric input takes a real fast path.
std::vector<double> hermitian_eigenvalues(const DenseMatrix& m);
EigenSystem hermitian_eigensystem(const DenseMatrix& m);

// Lowest k eigenvalues by Lanczos with full reorthogonalisation, keeping
// k + 8 Ritz values in flight.
std::vector<double> lowest_eigenvalues(const SparseMatrix& m, std::size_t k);

}  // namespace susyhom

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "susyhom/exact.hpp"
#include "susyhom/fock.hpp"
#include "susyhom/operators.hpp"

namespace susyhom {

using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;
using DenseMatrix = Eigen::MatrixXcd;

// Column-compressed matrix over the Gaussian rationals. Entries are kept
// sorted by row inside each column and never store zeros.
class ExactSparse {
 public:
  using Column = std::vector<std::pair<std::size_t, ExactComplex>>;

  ExactSparse() = default;
  ExactSparse(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const Column& column(std::size_t j) const { return columns_.at(j); }
  // Replaces column j; entries need not be sorted or unique.
  void set_column(std::size_t j, Column entries);
  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }
  bool is_real() const;

  ExactSparse adjoint() const;
  ExactSparse scaled(const ExactComplex& c) const;
  friend ExactSparse operator*(const ExactSparse& a, const ExactSparse& b);
  friend ExactSparse operator+(const ExactSparse& a, const ExactSparse& b);
  friend ExactSparse operator-(const ExactSparse& a, const ExactSparse& b);
  friend bool operator==(const ExactSparse& a, const ExactSparse& b);

  double max_abs() const;
  SparseMatrix to_sparse(double scale = 1.0) const;
  DenseMatrix to_dense(double scale = 1.0) const;

 private:
  std::size_t rows_ = 0;
  std::vector<Column> columns_;
};

// Block of `op` from sector l to sector l + grading, with targets outside the
// space projected out. The symbolic (1/sqrt 2)^k scale of `op` is NOT
// applied; callers multiply by op.scale() when going numeric.
// `grading` overrides the operator's own grading (needed for the zero
// operator, which has none); mixed-grading operators are rejected.
ExactSparse sector_matrix(const FermionOperator& op, const GradedSpace& space, std::size_t l,
                          std::optional<int> grading = std::nullopt);

// Rank over Q(i) by fraction-free sparse elimination on integer lifts of the
// rows. Complex input is handled through the real 2x2 block embedding.
std::size_t exact_rank(const ExactSparse& m);

}  // namespace susyhom

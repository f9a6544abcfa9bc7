#include "susyhom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "susyhom/errors.hpp"

namespace susyhom {

double hermiticity_residual(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("matrix is not square");
  if (m.size() == 0) return 0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double one_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double one_norm(const SparseMatrix& m) {
  double best = 0;
  for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
    double s = 0;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

namespace {

void check_dense_input(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("matrix is not square");
  if (static_cast<std::size_t>(m.rows()) > kDenseCap)
    throw CapExceeded("dimension " + std::to_string(m.rows()) + " exceeds the dense eigensolver cap of " +
                      std::to_string(kDenseCap));
  if (hermiticity_residual(m) > kHermitianTol) throw InputError("matrix is not Hermitian");
}

bool is_real(const DenseMatrix& m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::vector<double> hermitian_eigenvalues(const DenseMatrix& m) {
  check_dense_input(m);
  if (m.size() == 0) return {};
  Eigen::VectorXd values;
  if (is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
  }
  return {values.data(), values.data() + values.size()};
}

EigenSystem hermitian_eigensystem(const DenseMatrix& m) {
  check_dense_input(m);
  EigenSystem out;
  if (m.size() == 0) return out;
  if (is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

std::vector<double> lowest_eigenvalues(const SparseMatrix& m, std::size_t k) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.rows() != m.cols()) throw InputError("matrix is not square");
  if (k == 0 || n == 0) return {};
  k = std::min(k, n);
  const double norm = std::max(1.0, one_norm(m));
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  std::size_t krylov = std::min(n, std::max<std::size_t>(4 * (k + 8), 64));
  while (true) {
    // Lanczos with full reorthogonalisation against all previous vectors.
    DenseMatrix q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(krylov));
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = {gauss(rng), 0.0};
    v.normalize();
    std::vector<double> alpha, beta;
    std::size_t steps = 0;
    double last_beta = 0;
    for (; steps < krylov; ++steps) {
      q.col(static_cast<Eigen::Index>(steps)) = v;
      Eigen::VectorXcd w = m * v;
      alpha.push_back(v.dot(w).real());
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j <= steps; ++j) {
          auto qj = q.col(static_cast<Eigen::Index>(j));
          w -= qj * qj.dot(w);
        }
      last_beta = w.norm();
      if (steps + 1 == krylov) break;
      if (last_beta < 1e-12 * norm) {
        // Invariant subspace: restart with a fresh orthogonal direction.
        Eigen::VectorXcd r(static_cast<Eigen::Index>(n));
        for (auto& x : r) x = {gauss(rng), 0.0};
        for (std::size_t j = 0; j <= steps; ++j) {
          auto qj = q.col(static_cast<Eigen::Index>(j));
          r -= qj * qj.dot(r);
        }
        if (r.norm() < 1e-12) {
          ++steps;
          last_beta = 0;
          break;
        }
        beta.push_back(0.0);
        v = r.normalized();
        continue;
      }
      beta.push_back(last_beta);
      v = w / last_beta;
    }
    const std::size_t dim = alpha.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
      if (i + 1 < dim) {
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
        t(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    const std::size_t buffer = std::min(dim, k + 8);
    bool converged = dim == n || last_beta == 0;
    if (!converged) {
      converged = true;
      for (std::size_t i = 0; i < std::min(k, buffer); ++i) {
        const double residual =
            std::abs(last_beta * solver.eigenvectors()(static_cast<Eigen::Index>(dim - 1), static_cast<Eigen::Index>(i)));
        if (residual > 1e-10 * norm) converged = false;
      }
    }
    if (converged && dim >= k) {
      std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
      return out;
    }
    if (krylov == n) throw NumericalError("Lanczos failed to converge");
    krylov = std::min(n, 2 * krylov);
  }
}

}  // namespace susyhom

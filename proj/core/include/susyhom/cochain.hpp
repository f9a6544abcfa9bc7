#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "susyhom/exact_matrix.hpp"
#include "susyhom/fock.hpp"
#include "susyhom/linalg.hpp"
#include "susyhom/operators.hpp"

namespace susyhom {

inline constexpr double kZeroTol = 1e-8;

// Graded space plus a degree-one nilpotent operator d. Coboundary blocks
// M_l : V^l -> V^{l+1} are computed exactly on demand and cached; the cache
// is shared between copies and safe to fill from several threads.
class CochainComplex {
 public:
  // Throws InputError when d does not raise fermion number by one and
  // PreconditionError when d^2 != 0 on the space.
  CochainComplex(GradedSpace space, FermionOperator d);

  const GradedSpace& space() const { return space_; }
  const FermionOperator& differential() const { return d_; }
  std::size_t modes() const { return space_.modes(); }
  std::size_t dimension(std::size_t l) const { return space_.dimension(l); }
  std::vector<std::size_t> dimensions() const { return space_.dimensions(); }
  // Numeric factor of d, (1/sqrt 2)^k.
  double scale() const { return d_.scale(); }

  // Unscaled exact block of d from sector l (0 x dim when l = m).
  const ExactSparse& coboundary(std::size_t l) const;
  // Scaled numeric block.
  SparseMatrix coboundary_numeric(std::size_t l) const;

 private:
  struct Cache;
  GradedSpace space_;
  FermionOperator d_;
  std::shared_ptr<Cache> cache_;
};

// Max |entry| of d^2 over all sectors (exact arithmetic, reported as double).
double nilpotency_residual(const FermionOperator& d, const GradedSpace& space);

// Delta^l = M_{l-1} M_{l-1}^dag + M_l^dag M_l.
DenseMatrix laplacian(const CochainComplex& c, std::size_t l);
SparseMatrix laplacian_sparse(const CochainComplex& c, std::size_t l);
// Exact Laplacian including the rational part of the scale squared.
ExactSparse laplacian_exact(const CochainComplex& c, std::size_t l);

// B = d + d^dag on the whole space, basis ordered by sector then word.
DenseMatrix dirac(const CochainComplex& c);
std::vector<FockState> total_basis(const CochainComplex& c);

// Sorted eigenvalues of a Hermitian matrix (dense path up to kDenseCap).
std::vector<double> spectrum(const DenseMatrix& m);

enum class BettiMethod { exact_rank, spectral };

std::size_t betti(const CochainComplex& c, std::size_t l, BettiMethod method = BettiMethod::exact_rank,
                  double tol = kZeroTol);
std::vector<std::size_t> betti_numbers(const CochainComplex& c, BettiMethod method = BettiMethod::exact_rank,
                                       double tol = kZeroTol, unsigned workers = 1);

struct WittenRecord {
  long long from_dimensions = 0;
  long long from_betti = 0;
};
// Both alternating sums; throws NumericalError if they disagree.
WittenRecord witten_index(const CochainComplex& c, unsigned workers = 1);
long long witten_index(long long n_bosonic, long long n_fermionic);

inline constexpr double kNoGap = std::numeric_limits<double>::infinity();

// Smallest eigenvalue above zero_tol; +inf when there is none.
double spectral_gap(const std::vector<double>& eigenvalues, double zero_tol = kZeroTol);
double spectral_gap(const CochainComplex& c, std::size_t l, double zero_tol = kZeroTol);

struct PairingReport {
  std::vector<double> even_positive;
  std::vector<double> odd_positive;
  std::vector<double> unmatched_even;
  std::vector<double> unmatched_odd;
  bool paired() const { return unmatched_even.empty() && unmatched_odd.empty(); }
};
// Positive spectrum of the Hamiltonian on even-F versus odd-F sectors.
PairingReport pairing_report(const CochainComplex& c, double tol = kZeroTol, unsigned workers = 1);

// #{lambda <= b} / dim for a PSD Hermitian matrix.
double low_lying_density(const DenseMatrix& m, double b, double tol = 1e-9);
double low_lying_density(const CochainComplex& c, std::size_t l, double b, double tol = 1e-9);

// (||M_l v||, ||M_{l-1}^dag v||) for a unit vector v in V^l.
std::pair<double, double> ground_state_check(const CochainComplex& c, std::size_t l, const Eigen::VectorXcd& v);

struct SpectralReport {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> betti;
  long long euler = 0;
  long long witten = 0;
  std::vector<double> gaps;  // +inf (serialised as null) for no gap / empty sector
  bool pairing_ok = false;
};
SpectralReport spectral_report(const CochainComplex& c, double tol = kZeroTol, unsigned workers = 1);
std::string to_json(const SpectralReport& r);

}  // namespace susyhom

#include "susyhom/cochain.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/parallel.hpp"

namespace susyhom {

struct CochainComplex::Cache {
  std::mutex mutex;
  std::vector<std::shared_ptr<const ExactSparse>> blocks;
};

CochainComplex::CochainComplex(GradedSpace space, FermionOperator d)
    : space_(std::move(space)), d_(std::move(d)), cache_(std::make_shared<Cache>()) {
  if (d_.modes() != space_.modes())
    throw InputError("differential acts on " + std::to_string(d_.modes()) + " modes, space has " +
                     std::to_string(space_.modes()));
  if (!d_.is_zero()) {
    auto g = d_.grading();
    if (!g || *g != 1) throw InputError("differential must raise fermion number by exactly one");
  }
  cache_->blocks.resize(space_.modes() + 1);
  for (std::size_t l = 0; l + 2 <= space_.modes(); ++l) {
    if (!(coboundary(l + 1) * coboundary(l)).is_zero())
      throw PreconditionError("d^2 != 0 on sector " + std::to_string(l));
  }
}

const ExactSparse& CochainComplex::coboundary(std::size_t l) const {
  if (l > space_.modes()) throw std::out_of_range("sector " + std::to_string(l) + " out of range");
  {
    std::lock_guard lock(cache_->mutex);
    if (cache_->blocks[l]) return *cache_->blocks[l];
  }
  auto block = std::make_shared<const ExactSparse>(sector_matrix(d_, space_, l, 1));
  std::lock_guard lock(cache_->mutex);
  if (!cache_->blocks[l]) cache_->blocks[l] = std::move(block);
  return *cache_->blocks[l];
}

SparseMatrix CochainComplex::coboundary_numeric(std::size_t l) const { return coboundary(l).to_sparse(scale()); }

double nilpotency_residual(const FermionOperator& d, const GradedSpace& space) {
  if (d.is_zero()) return 0;
  auto g = d.grading();
  if (!g) throw InputError("operator mixes gradings");
  double worst = 0;
  const double s2 = d.scale() * d.scale();
  for (std::size_t l = 0; l <= space.modes(); ++l) {
    const long mid = static_cast<long>(l) + *g;
    if (mid < 0 || mid > static_cast<long>(space.modes())) continue;
    ExactSparse first = sector_matrix(d, space, l);
    ExactSparse second = sector_matrix(d, space, static_cast<std::size_t>(mid));
    if (second.cols() != first.rows()) continue;
    worst = std::max(worst, (second * first).max_abs() * s2);
  }
  return worst;
}

SparseMatrix laplacian_sparse(const CochainComplex& c, std::size_t l) {
  const auto dim = static_cast<Eigen::Index>(c.dimension(l));
  SparseMatrix out(dim, dim);
  if (l >= 1) {
    SparseMatrix below = c.coboundary_numeric(l - 1);
    out += SparseMatrix(below * below.adjoint());
  }
  SparseMatrix up = c.coboundary_numeric(l);
  out += SparseMatrix(up.adjoint() * up);
  out.prune(std::complex<double>(0.0));
  return out;
}

DenseMatrix laplacian(const CochainComplex& c, std::size_t l) {
  const auto dim = c.dimension(l);
  if (dim > kDenseCap)
    throw CapExceeded("sector dimension " + std::to_string(dim) + " exceeds the dense cap of " +
                      std::to_string(kDenseCap));
  return DenseMatrix(laplacian_sparse(c, l));
}

ExactSparse laplacian_exact(const CochainComplex& c, std::size_t l) {
  const ExactSparse& up = c.coboundary(l);
  ExactSparse out = up.adjoint() * up;
  if (l >= 1) {
    const ExactSparse& below = c.coboundary(l - 1);
    out = out + below * below.adjoint();
  }
  // The scale is (1/sqrt 2)^k with k in {0, 1}, so its square is rational.
  if (c.differential().inv_sqrt2_power() == 1) out = out.scaled(ExactComplex(Rational(1, 2)));
  return out;
}

std::vector<FockState> total_basis(const CochainComplex& c) {
  std::vector<FockState> basis;
  for (std::size_t l = 0; l <= c.modes(); ++l) {
    const SectorBasis& s = c.space().sector_basis(l);
    for (std::size_t k = 0; k < s.size(); ++k) basis.push_back(s.state(k));
  }
  return basis;
}

DenseMatrix dirac(const CochainComplex& c) {
  std::vector<Eigen::Index> offset(c.modes() + 2, 0);
  for (std::size_t l = 0; l <= c.modes(); ++l)
    offset[l + 1] = offset[l] + static_cast<Eigen::Index>(c.dimension(l));
  const Eigen::Index total = offset.back();
  if (static_cast<std::size_t>(total) > kDenseCap)
    throw CapExceeded("total dimension " + std::to_string(total) + " exceeds the dense cap of " +
                      std::to_string(kDenseCap));
  DenseMatrix b = DenseMatrix::Zero(total, total);
  for (std::size_t l = 0; l < c.modes(); ++l) {
    DenseMatrix block = c.coboundary(l).to_dense(c.scale());
    if (block.size() == 0) continue;
    b.block(offset[l + 1], offset[l], block.rows(), block.cols()) = block;
    b.block(offset[l], offset[l + 1], block.cols(), block.rows()) = block.adjoint();
  }
  return b;
}

std::vector<double> spectrum(const DenseMatrix& m) { return hermitian_eigenvalues(m); }

namespace {

double zero_threshold(const SparseMatrix& delta, double tol) { return tol * std::max(1.0, one_norm(delta)); }

// Count of eigenvalues of Delta^l below the relative zero threshold.
std::size_t spectral_kernel_dimension(const CochainComplex& c, std::size_t l, double tol) {
  const std::size_t dim = c.dimension(l);
  if (dim == 0) return 0;
  SparseMatrix delta = laplacian_sparse(c, l);
  const double threshold = zero_threshold(delta, tol);
  if (dim <= kDenseCap) {
    auto values = hermitian_eigenvalues(DenseMatrix(delta));
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) { return v < threshold; }));
  }
  for (std::size_t k = 8;; k = std::min(dim, 2 * k)) {
    auto values = lowest_eigenvalues(delta, k);
    auto zeros = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) { return v < threshold; }));
    if (zeros < values.size() || k == dim) return zeros;
  }
}

std::vector<double> sector_spectrum(const CochainComplex& c, std::size_t l) {
  if (c.dimension(l) == 0) return {};
  return hermitian_eigenvalues(laplacian(c, l));
}

}  // namespace

std::size_t betti(const CochainComplex& c, std::size_t l, BettiMethod method, double tol) {
  if (l > c.modes()) throw std::out_of_range("sector " + std::to_string(l) + " out of range");
  if (method == BettiMethod::spectral) return spectral_kernel_dimension(c, l, tol);
  const std::size_t dim = c.dimension(l);
  const std::size_t rank_out = exact_rank(c.coboundary(l));
  const std::size_t rank_in = l >= 1 ? exact_rank(c.coboundary(l - 1)) : 0;
  if (rank_out + rank_in > dim) throw NumericalError("rank exceeds sector dimension");
  return dim - rank_out - rank_in;
}

std::vector<std::size_t> betti_numbers(const CochainComplex& c, BettiMethod method, double tol, unsigned workers) {
  const std::size_t sectors = c.modes() + 1;
  std::vector<std::size_t> out(sectors);
  if (method == BettiMethod::spectral) {
    parallel_for(sectors, workers, [&](std::size_t l) { out[l] = spectral_kernel_dimension(c, l, tol); });
    return out;
  }
  std::vector<std::size_t> ranks(sectors);
  parallel_for(sectors, workers, [&](std::size_t l) { ranks[l] = exact_rank(c.coboundary(l)); });
  for (std::size_t l = 0; l < sectors; ++l) {
    const std::size_t used = ranks[l] + (l >= 1 ? ranks[l - 1] : 0);
    if (used > c.dimension(l)) throw NumericalError("rank exceeds sector dimension");
    out[l] = c.dimension(l) - used;
  }
  return out;
}

long long witten_index(long long n_bosonic, long long n_fermionic) { return n_bosonic - n_fermionic; }

WittenRecord witten_index(const CochainComplex& c, unsigned workers) {
  WittenRecord r;
  auto dims = c.dimensions();
  auto b = betti_numbers(c, BettiMethod::exact_rank, kZeroTol, workers);
  for (std::size_t l = 0; l < dims.size(); ++l) {
    const long long sign = (l % 2 == 0) ? 1 : -1;
    r.from_dimensions += sign * static_cast<long long>(dims[l]);
    r.from_betti += sign * static_cast<long long>(b[l]);
  }
  if (r.from_dimensions != r.from_betti)
    throw NumericalError("Witten index from dimensions (" + std::to_string(r.from_dimensions) +
                         ") disagrees with Betti numbers (" + std::to_string(r.from_betti) + ")");
  return r;
}

double spectral_gap(const std::vector<double>& eigenvalues, double zero_tol) {
  double gap = kNoGap;
  for (double v : eigenvalues)
    if (v > zero_tol) gap = std::min(gap, v);
  return gap;
}

double spectral_gap(const CochainComplex& c, std::size_t l, double zero_tol) {
  if (c.dimension(l) == 0) throw PreconditionError("sector " + std::to_string(l) + " is empty");
  return spectral_gap(sector_spectrum(c, l), zero_tol);
}

namespace {

PairingReport pair_spectra(const std::vector<std::vector<double>>& spectra, const std::vector<double>& thresholds,
                           double tol) {
  PairingReport r;
  for (std::size_t l = 0; l < spectra.size(); ++l)
    for (double v : spectra[l])
      if (v > thresholds[l]) (l % 2 == 0 ? r.even_positive : r.odd_positive).push_back(v);
  std::sort(r.even_positive.begin(), r.even_positive.end());
  std::sort(r.odd_positive.begin(), r.odd_positive.end());
  std::size_t i = 0, j = 0;
  const auto& e = r.even_positive;
  const auto& o = r.odd_positive;
  while (i < e.size() && j < o.size()) {
    if (std::abs(e[i] - o[j]) <= tol * std::max({1.0, e[i], o[j]})) {
      ++i;
      ++j;
    } else if (e[i] < o[j]) {
      r.unmatched_even.push_back(e[i++]);
    } else {
      r.unmatched_odd.push_back(o[j++]);
    }
  }
  r.unmatched_even.insert(r.unmatched_even.end(), e.begin() + static_cast<long>(i), e.end());
  r.unmatched_odd.insert(r.unmatched_odd.end(), o.begin() + static_cast<long>(j), o.end());
  return r;
}

struct SectorData {
  std::vector<std::vector<double>> spectra;
  std::vector<double> thresholds;
};

SectorData all_spectra(const CochainComplex& c, double tol, unsigned workers) {
  SectorData data;
  const std::size_t sectors = c.modes() + 1;
  data.spectra.resize(sectors);
  data.thresholds.resize(sectors);
  parallel_for(sectors, workers, [&](std::size_t l) {
    if (c.dimension(l) == 0) return;
    DenseMatrix delta = laplacian(c, l);
    data.thresholds[l] = tol * std::max(1.0, one_norm(delta));
    data.spectra[l] = hermitian_eigenvalues(delta);
  });
  return data;
}

}  // namespace

PairingReport pairing_report(const CochainComplex& c, double tol, unsigned workers) {
  SectorData data = all_spectra(c, tol, workers);
  return pair_spectra(data.spectra, data.thresholds, tol);
}

double low_lying_density(const DenseMatrix& m, double b, double tol) {
  if (m.rows() == 0) throw PreconditionError("empty matrix has no eigenvalue density");
  auto values = hermitian_eigenvalues(m);
  if (values.front() < -tol * std::max(1.0, one_norm(m)))
    throw PreconditionError("matrix is not positive semidefinite");
  const auto count = std::count_if(values.begin(), values.end(), [&](double v) { return v <= b; });
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double low_lying_density(const CochainComplex& c, std::size_t l, double b, double tol) {
  return low_lying_density(laplacian(c, l), b, tol);
}

std::pair<double, double> ground_state_check(const CochainComplex& c, std::size_t l, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != c.dimension(l))
    throw InputError("vector has length " + std::to_string(v.size()) + ", sector has dimension " +
                     std::to_string(c.dimension(l)));
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InputError("vector is not normalised");
  const double up = (c.coboundary_numeric(l) * v).norm();
  const double down = l >= 1 ? (SparseMatrix(c.coboundary_numeric(l - 1).adjoint()) * v).norm() : 0.0;
  return {up, down};
}

SpectralReport spectral_report(const CochainComplex& c, double tol, unsigned workers) {
  SpectralReport r;
  r.dims = c.dimensions();
  r.betti = betti_numbers(c, BettiMethod::exact_rank, tol, workers);
  for (std::size_t l = 0; l < r.dims.size(); ++l) {
    const long long sign = (l % 2 == 0) ? 1 : -1;
    r.euler += sign * static_cast<long long>(r.betti[l]);
    r.witten += sign * static_cast<long long>(r.dims[l]);
  }
  if (r.euler != r.witten)
    throw NumericalError("Witten index from dimensions disagrees with Betti numbers");
  SectorData data = all_spectra(c, tol, workers);
  for (std::size_t l = 0; l < r.dims.size(); ++l)
    r.gaps.push_back(r.dims[l] == 0 ? kNoGap : spectral_gap(data.spectra[l], data.thresholds[l]));
  r.pairing_ok = pair_spectra(data.spectra, data.thresholds, tol).paired();
  return r;
}

std::string to_json(const SpectralReport& r) {
  nlohmann::json j;
  j["dims"] = r.dims;
  j["betti"] = r.betti;
  j["euler"] = r.euler;
  j["witten"] = r.witten;
  nlohmann::json gaps = nlohmann::json::array();
  for (double g : r.gaps) gaps.push_back(detail::json_number(g));
  j["gaps"] = gaps;
  j["pairing_ok"] = r.pairing_ok;
  return j.dump();
}

}  // namespace susyhom

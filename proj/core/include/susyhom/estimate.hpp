#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "susyhom/cochain.hpp"

namespace susyhom {

// t_bits value meaning "report eigenvalues exactly".
inline constexpr int kExactReadout = 0;
// t_bits value meaning "smallest precision whose grid spacing is below delta/2".
inline constexpr int kAutoReadout = -1;

struct EstimatorConfig {
  double b = 0;
  double delta = 0.1;
  double eps = 0.05;
  double mu = 0.9;
  int t_bits = kAutoReadout;
  std::uint64_t seed = 0;
  // Count every eigenvalue once instead of sampling.
  bool enumerate = false;
  // Two-stage estimator: smallest admissible dim V^l / 2^m.
  double density_floor = 1.0 / 16;
  unsigned workers = 1;

  // Throws InputError for out-of-range parameters.
  void validate() const;
  // N = ceil(ln(2 / (1 - mu)) / (2 eps^2)).
  std::size_t sample_count() const;
};

// Models phase-estimation readout of a PSD Hermitian matrix: eigenvalues
// rounded to the grid lambda_scale / 2^t_bits, where lambda_scale is the
// smallest power of two (>= 1) bounding the spectrum.
class EigenvalueReadout {
 public:
  // t_bits >= 0; kExactReadout disables rounding. Rejects non-PSD input.
  EigenvalueReadout(const DenseMatrix& m, int t_bits, bool keep_vectors = false);

  int t_bits() const { return t_bits_; }
  void set_t_bits(int t_bits);

  std::size_t dimension() const { return values_.size(); }
  double lambda_scale() const { return lambda_scale_; }
  // 0 in exact mode.
  double grid_spacing() const;
  double readout(std::size_t k) const;
  const std::vector<double>& eigenvalues() const { return values_; }
  const DenseMatrix& eigenvectors() const { return vectors_; }
  // Readout of a uniformly random eigenvalue (maximally mixed input).
  double sample(std::mt19937_64& rng) const;

 private:
  std::vector<double> values_;
  DenseMatrix vectors_;
  double lambda_scale_ = 1;
  int t_bits_;
};

double sample_eigenvalue(const DenseMatrix& m, std::mt19937_64& rng, int t_bits = kExactReadout);

struct EstimateReport {
  double chi = 0;
  std::size_t samples = 0;
  EstimatorConfig config;
  std::string method;  // "qbne", "llsd" or "dqc1"
  // Two-stage details (empty for single-stage estimators).
  int t_bits = kExactReadout;  // resolved precision
  double threshold = 0;         // readouts <= threshold count as low-lying
  double p1 = 0, q = 0, bound = 0;
  std::size_t stage1_samples = 0, stage2_samples = 0;
};

// Fraction of readouts <= b + delta/2 over the sector Laplacian. With
// probability >= mu the result lies in [N(b) - eps, N(b + delta) + eps].
EstimateReport qbne(const CochainComplex& c, std::size_t l, const EstimatorConfig& cfg);
// Same estimator for an arbitrary PSD Hermitian matrix.
EstimateReport llsd(const DenseMatrix& m, const EstimatorConfig& cfg);
// Two-stage variant from uniformly random full-space inputs: p1 estimates
// (low-lying count)/2^m, q estimates dim V^l / 2^m, chi = p1 / q.
// Throws PreconditionError when the sector density is below the floor.
EstimateReport dqc1_qbne(const CochainComplex& c, std::size_t l, const EstimatorConfig& cfg);

std::string to_json(const EstimateReport& r);

}  // namespace susyhom

#include "susyhom/estimate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/parallel.hpp"

namespace susyhom {

void EstimatorConfig::validate() const {
  if (!std::isfinite(b)) throw InputError("b must be finite");
  if (!(delta > 0) || !std::isfinite(delta)) throw InputError("delta must be positive");
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0, 1)");
  if (!(mu > 0 && mu < 1)) throw InputError("mu must lie in (0, 1)");
  if (t_bits < kAutoReadout || t_bits > 52) throw InputError("t_bits must lie in [0, 52] (or -1 for auto)");
  if (!(density_floor > 0 && density_floor <= 1)) throw InputError("density floor must lie in (0, 1]");
}

namespace {

std::size_t hoeffding_count(double accuracy, double confidence) {
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / (1.0 - confidence)) / (2.0 * accuracy * accuracy)));
}

}  // namespace

std::size_t EstimatorConfig::sample_count() const { return hoeffding_count(eps, mu); }

EigenvalueReadout::EigenvalueReadout(const DenseMatrix& m, int t_bits, bool keep_vectors) : t_bits_(kExactReadout) {
  if (m.rows() == 0) throw PreconditionError("empty sector has no eigenvalues to read out");
  if (keep_vectors) {
    EigenSystem sys = hermitian_eigensystem(m);
    values_.assign(sys.values.data(), sys.values.data() + sys.values.size());
    vectors_ = std::move(sys.vectors);
  } else {
    values_ = hermitian_eigenvalues(m);
  }
  if (values_.front() < -1e-9 * std::max(1.0, one_norm(m)))
    throw PreconditionError("matrix is not positive semidefinite");
  while (lambda_scale_ < values_.back()) lambda_scale_ *= 2;
  set_t_bits(t_bits);
}

void EigenvalueReadout::set_t_bits(int t_bits) {
  if (t_bits < 0 || t_bits > 52) throw InputError("t_bits must lie in [0, 52]");
  t_bits_ = t_bits;
}

double EigenvalueReadout::grid_spacing() const {
  return t_bits_ == kExactReadout ? 0.0 : std::ldexp(lambda_scale_, -t_bits_);
}

double EigenvalueReadout::readout(std::size_t k) const {
  const double v = values_.at(k);
  if (t_bits_ == kExactReadout) return v;
  const double grid = grid_spacing();
  return std::round(v / grid) * grid;
}

double EigenvalueReadout::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, values_.size() - 1);
  return readout(pick(rng));
}

double sample_eigenvalue(const DenseMatrix& m, std::mt19937_64& rng, int t_bits) {
  return EigenvalueReadout(m, t_bits).sample(rng);
}

namespace {

constexpr std::size_t kBatch = 4096;

// Independent stream per (seed, stage, batch) so results do not depend on
// the number of workers.
std::mt19937_64 substream(std::uint64_t seed, std::uint32_t stage, std::size_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stage,
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(std::uint64_t{batch} >> 32)};
  return std::mt19937_64(seq);
}

// Sums counter(rng, n) over fixed-size batches.
template <class Counter>
std::size_t batched_count(std::size_t samples, std::uint64_t seed, std::uint32_t stage, unsigned workers,
                          Counter&& counter) {
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<std::size_t> counts(batches, 0);
  parallel_for(batches, workers, [&](std::size_t k) {
    auto rng = substream(seed, stage, k);
    const std::size_t n = std::min(kBatch, samples - k * kBatch);
    counts[k] = counter(rng, n);
  });
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

// Applies the configured precision, choosing one when t_bits is auto.
void resolve_bits(EigenvalueReadout& r, const EstimatorConfig& cfg) {
  if (cfg.t_bits == kExactReadout) return;
  if (cfg.t_bits == kAutoReadout) {
    int t = 1;
    while (std::ldexp(r.lambda_scale(), -t) >= cfg.delta / 2) ++t;
    if (t > 52) throw InputError("delta too small for the readout precision");
    r.set_t_bits(t);
    return;
  }
  r.set_t_bits(cfg.t_bits);
  if (r.grid_spacing() >= cfg.delta / 2)
    throw InputError("t_bits = " + std::to_string(cfg.t_bits) + " gives grid spacing " +
                     std::to_string(r.grid_spacing()) + ", not below delta/2");
}

EstimateReport single_stage(const DenseMatrix& m, const EstimatorConfig& cfg, const char* method) {
  cfg.validate();
  EigenvalueReadout readout(m, kExactReadout);
  resolve_bits(readout, cfg);
  EstimateReport r;
  r.config = cfg;
  r.method = method;
  r.t_bits = readout.t_bits();
  r.threshold = cfg.b + cfg.delta / 2;
  const std::size_t dim = readout.dimension();
  if (cfg.enumerate) {
    std::size_t low = 0;
    for (std::size_t k = 0; k < dim; ++k) low += readout.readout(k) <= r.threshold;
    r.samples = dim;
    r.chi = static_cast<double>(low) / static_cast<double>(dim);
    return r;
  }
  r.samples = cfg.sample_count();
  const std::size_t low = batched_count(r.samples, cfg.seed, 1, cfg.workers, [&](std::mt19937_64& rng, std::size_t n) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n; ++s) hits += readout.sample(rng) <= r.threshold;
    return hits;
  });
  r.chi = static_cast<double>(low) / static_cast<double>(r.samples);
  return r;
}

}  // namespace

EstimateReport qbne(const CochainComplex& c, std::size_t l, const EstimatorConfig& cfg) {
  if (l > c.modes()) throw std::out_of_range("sector " + std::to_string(l) + " out of range");
  if (c.dimension(l) == 0) throw PreconditionError("sector " + std::to_string(l) + " is empty");
  return single_stage(laplacian(c, l), cfg, "qbne");
}

EstimateReport llsd(const DenseMatrix& m, const EstimatorConfig& cfg) { return single_stage(m, cfg, "llsd"); }

EstimateReport dqc1_qbne(const CochainComplex& c, std::size_t l, const EstimatorConfig& cfg) {
  cfg.validate();
  if (l > c.modes()) throw std::out_of_range("sector " + std::to_string(l) + " out of range");
  const SectorBasis& basis = c.space().sector_basis(l);
  if (basis.empty()) throw PreconditionError("sector " + std::to_string(l) + " is empty");
  const std::size_t m = c.modes();
  EigenvalueReadout readout(laplacian(c, l), kExactReadout, true);
  resolve_bits(readout, cfg);

  EstimateReport r;
  r.config = cfg;
  r.method = "dqc1";
  r.t_bits = readout.t_bits();
  r.threshold = cfg.b + cfg.delta / 2;
  // Probability that phase estimation on basis input x reports a low
  // eigenvalue: sum_k |<v_k|x>|^2 [readout_k <= threshold].
  std::vector<double> accept(basis.size(), 0.0);
  std::size_t low = 0;
  for (std::size_t k = 0; k < readout.dimension(); ++k) {
    if (readout.readout(k) > r.threshold) continue;
    ++low;
    for (std::size_t x = 0; x < basis.size(); ++x)
      accept[x] += std::norm(readout.eigenvectors()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)));
  }
  const double full = std::ldexp(1.0, static_cast<int>(m));
  if (cfg.enumerate) {
    r.q = static_cast<double>(basis.size()) / full;
    if (r.q < cfg.density_floor)
      throw PreconditionError("sector density " + std::to_string(r.q) + " is below the floor " +
                              std::to_string(cfg.density_floor));
    r.p1 = static_cast<double>(low) / full;
    r.chi = static_cast<double>(low) / static_cast<double>(basis.size());
    r.samples = basis.size();
    return r;
  }
  const double confidence = 1.0 - (1.0 - cfg.mu) / 2;  // union bound over both stages
  const std::uint64_t mask = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  auto in_sector = [&](std::uint64_t w) {
    return static_cast<std::size_t>(std::popcount(w)) == l && c.space().member_word(w);
  };

  const double eta2 = cfg.eps * cfg.density_floor / 4;
  r.stage2_samples = hoeffding_count(eta2, confidence);
  const std::size_t members = batched_count(r.stage2_samples, cfg.seed, 2, cfg.workers,
                                            [&](std::mt19937_64& rng, std::size_t n) {
                                              std::size_t hits = 0;
                                              for (std::size_t s = 0; s < n; ++s) hits += in_sector(rng() & mask);
                                              return hits;
                                            });
  r.q = static_cast<double>(members) / static_cast<double>(r.stage2_samples);
  if (r.q + eta2 < cfg.density_floor)
    throw PreconditionError("sector density estimate " + std::to_string(r.q) + " is below the floor " +
                            std::to_string(cfg.density_floor));

  const double eta1 = cfg.eps * r.q / 2;
  r.stage1_samples = hoeffding_count(eta1, confidence);
  const std::size_t hits = batched_count(r.stage1_samples, cfg.seed, 3, cfg.workers,
                                         [&](std::mt19937_64& rng, std::size_t n) {
                                           std::uniform_real_distribution<double> u(0.0, 1.0);
                                           std::size_t h = 0;
                                           for (std::size_t s = 0; s < n; ++s) {
                                             const std::uint64_t w = rng() & mask;
                                             if (!in_sector(w)) continue;
                                             h += u(rng) < accept[*basis.index_of(w)];
                                           }
                                           return h;
                                         });
  r.p1 = static_cast<double>(hits) / static_cast<double>(r.stage1_samples);
  r.chi = r.p1 / r.q;
  const double e1 = eta1 / r.q;
  const double e2 = eta2 / r.q;
  r.bound = (e1 + e2) / (1 - e2);
  r.samples = r.stage1_samples + r.stage2_samples;
  return r;
}

std::string to_json(const EstimateReport& r) {
  nlohmann::json j;
  j["chi"] = detail::json_number(r.chi);
  j["N"] = r.samples;
  j["b"] = detail::json_number(r.config.b);
  j["delta"] = detail::json_number(r.config.delta);
  j["eps"] = detail::json_number(r.config.eps);
  j["mu"] = detail::json_number(r.config.mu);
  j["seed"] = r.config.seed;
  nlohmann::json stage;
  stage["method"] = r.method;
  stage["t_bits"] = r.t_bits;
  stage["threshold"] = detail::json_number(r.threshold);
  stage["enumerate"] = r.config.enumerate;
  if (r.method == "dqc1") {
    stage["p1"] = detail::json_number(r.p1);
    stage["q"] = detail::json_number(r.q);
    stage["bound"] = detail::json_number(r.bound);
    stage["N1"] = r.stage1_samples;
    stage["N2"] = r.stage2_samples;
    stage["density_floor"] = detail::json_number(r.config.density_floor);
  }
  j["stage"] = stage;
  return j.dump();
}

}  // namespace susyhom

#include "susyhom/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

#include "susyhom/errors.hpp"

namespace susyhom {

std::size_t default_mode_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("SUSYHOM_MAX_MODES")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1 && v <= static_cast<long>(kMaxModes))
        return static_cast<std::size_t>(v);
    }
    return kDefaultModeCap;
  }();
  return cap;
}

FockState::FockState(std::uint64_t occ, std::size_t m) : occupancy(occ), modes(m) {
  if (m > kMaxModes) throw std::invalid_argument("at most 64 modes are supported");
  if (m < 64 && (occ >> m) != 0)
    throw std::invalid_argument("occupancy has bits beyond mode count " + std::to_string(m));
}

std::optional<SignedState> apply_mode(ModeAction action, std::size_t i, const FockState& s) {
  if (i >= s.modes)
    throw std::out_of_range("mode " + std::to_string(i) + " out of range for " +
                            std::to_string(s.modes) + " modes");
  std::uint64_t word = s.occupancy;
  int sign = 1;
  if (!apply_mode_bits(action == ModeAction::create, i, word, sign)) return std::nullopt;
  return SignedState{sign, FockState(word, s.modes)};
}

ConstraintSet::ConstraintSet(std::vector<std::vector<std::size_t>> forbidden) {
  for (auto& set : forbidden) {
    if (set.empty()) throw InputError("empty forbidden set excludes every state");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    std::uint64_t mask = 0;
    for (std::size_t i : set) {
      if (i >= kMaxModes) throw InputError("constraint references mode " + std::to_string(i));
      mask |= std::uint64_t{1} << i;
      span_ = std::max(span_, i + 1);
    }
    if (std::find(masks_.begin(), masks_.end(), mask) != masks_.end()) continue;
    masks_.push_back(mask);
    forbidden_.push_back(std::move(set));
  }
}

std::optional<std::size_t> SectorBasis::index_of(std::uint64_t word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

struct GradedSpace::Cache {
  std::mutex mutex;
  std::vector<std::shared_ptr<const SectorBasis>> sectors;
};

GradedSpace::GradedSpace(std::size_t modes, ConstraintSet constraints, std::size_t cap)
    : modes_(modes), constraints_(std::move(constraints)), cap_(cap), cache_(std::make_shared<Cache>()) {
  if (modes > kMaxModes) throw InputError("at most 64 modes are supported");
  if (constraints_.span() > modes)
    throw InputError("constraint references mode " + std::to_string(constraints_.span() - 1) +
                     " but the space has " + std::to_string(modes) + " modes");
  if (constraints_.masks().size() > std::max<std::size_t>(1, modes * modes))
    throw InputError("more than m^2 forbidden monomials");
  cache_->sectors.resize(modes + 1);
}

GradedSpace GradedSpace::dual_rail(DualRailLayout layout, std::size_t cap) {
  std::vector<std::vector<std::size_t>> forbidden;
  for (std::size_t s = layout.free_sites; s < layout.sites(); ++s) forbidden.push_back({2 * s, 2 * s + 1});
  GradedSpace space(layout.modes(), ConstraintSet(std::move(forbidden)), cap);
  space.layout_ = layout;
  return space;
}

bool GradedSpace::member(const FockState& s) const {
  if (s.modes != modes_)
    throw InputError("state has " + std::to_string(s.modes) + " modes, space has " +
                     std::to_string(modes_));
  return member_word(s.occupancy);
}

const SectorBasis& GradedSpace::sector_basis(std::size_t l) const {
  if (l > modes_)
    throw std::out_of_range("sector " + std::to_string(l) + " out of range for " +
                            std::to_string(modes_) + " modes");
  {
    std::lock_guard lock(cache_->mutex);
    if (cache_->sectors[l]) return *cache_->sectors[l];
  }
  if (modes_ > cap_)
    throw CapExceeded("space has " + std::to_string(modes_) + " modes, above the enumeration cap of " +
                      std::to_string(cap_) + " (set SUSYHOM_MAX_MODES to raise it)");
  std::vector<std::uint64_t> words;
  if (l == 0) {
    if (constraints_.allows(0)) words.push_back(0);
  } else {
    // Gosper's hack walks weight-l words in increasing order.
    std::uint64_t w = (l == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << l) - 1;
    const std::uint64_t limit = full_mask();
    while (true) {
      if (constraints_.allows(w)) words.push_back(w);
      if (l == modes_) break;
      const std::uint64_t c = w & (~w + 1);
      const std::uint64_t r = w + c;
      if (r == 0 || r > limit) break;
      const std::uint64_t next = (((r ^ w) >> 2) / c) | r;
      if (next > limit) break;
      w = next;
    }
  }
  auto basis = std::make_shared<const SectorBasis>(std::move(words), modes_);
  std::lock_guard lock(cache_->mutex);
  if (!cache_->sectors[l]) cache_->sectors[l] = std::move(basis);
  return *cache_->sectors[l];
}

std::vector<std::size_t> GradedSpace::dimensions() const {
  std::vector<std::size_t> dims(modes_ + 1);
  for (std::size_t l = 0; l <= modes_; ++l) dims[l] = dimension(l);
  return dims;
}

std::size_t GradedSpace::total_dimension() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l <= modes_; ++l) total += dimension(l);
  return total;
}

namespace {

// k distinct indices from [0, n), uniformly, via partial Fisher-Yates.
std::vector<std::size_t> choose_indices(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

long double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return r;
}

}  // namespace

FockState GradedSpace::sample_dual_rail(std::size_t l, std::mt19937_64& rng) const {
  const DualRailLayout& lay = *layout_;
  const std::size_t free_modes = 2 * lay.free_sites;
  // Weight of putting k fermions on free modes and l-k on exclusive sites.
  std::vector<long double> weights;
  for (std::size_t k = 0; k <= l; ++k) {
    const std::size_t rest = l - k;
    weights.push_back(binomial(free_modes, k) * binomial(lay.exclusive_sites, rest) *
                      std::ldexp(1.0L, static_cast<int>(rest)));
  }
  long double total = 0;
  for (auto w : weights) total += w;
  if (total == 0) throw PreconditionError("sector " + std::to_string(l) + " is empty");
  std::uniform_real_distribution<long double> u(0, total);
  long double x = u(rng);
  std::size_t k = 0;
  for (; k < l; ++k) {
    if (x < weights[k] && weights[k] > 0) break;
    x -= weights[k];
  }
  while (weights[k] == 0) --k;  // guards the x == total edge case
  std::uint64_t word = 0;
  for (std::size_t i : choose_indices(free_modes, k, rng)) word |= std::uint64_t{1} << i;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t site : choose_indices(lay.exclusive_sites, l - k, rng)) {
    const std::size_t s = lay.free_sites + site;
    word |= std::uint64_t{1} << (2 * s + (coin(rng) ? 1 : 0));
  }
  return {word, modes_};
}

FockState GradedSpace::sample_sector(std::size_t l, std::mt19937_64& rng, std::size_t max_tries) const {
  if (l > modes_)
    throw std::out_of_range("sector " + std::to_string(l) + " out of range for " +
                            std::to_string(modes_) + " modes");
  if (layout_) return sample_dual_rail(l, rng);
  constexpr std::size_t kTryCeiling = std::size_t{1} << 26;
  if (max_tries == 0) {
    max_tries = kTryCeiling;
    if (modes_ <= cap_) {
      const std::size_t dim = dimension(l);
      if (dim == 0) throw PreconditionError("sector " + std::to_string(l) + " is empty");
      const long double ratio = std::ceil(std::ldexp(1.0L, static_cast<int>(modes_)) / dim);
      max_tries = static_cast<std::size_t>(std::min<long double>(64 * ratio, kTryCeiling));
    }
  }
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::uint64_t word = 0;
    for (std::size_t i : choose_indices(modes_, l, rng)) word |= std::uint64_t{1} << i;
    if (constraints_.allows(word)) return {word, modes_};
    if (constraints_.empty()) break;
  }
  throw PreconditionError("rejection sampling of sector " + std::to_string(l) + " failed after " +
                          std::to_string(max_tries) + " tries (sector too sparse)");
}

}  // namespace susyhom

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace susyhom {

inline constexpr std::size_t kMaxModes = 64;
inline constexpr std::size_t kDefaultModeCap = 24;

// Cap on modes for which sectors are enumerated densely. SUSYHOM_MAX_MODES
// overrides the default when set to an integer in [1, 64].
std::size_t default_mode_cap();

// Occupation-number basis state; bit i of `occupancy` is n_i.
struct FockState {
  std::uint64_t occupancy = 0;
  std::size_t modes = 0;

  FockState() = default;
  FockState(std::uint64_t occ, std::size_t m);

  std::size_t fermion_number() const { return static_cast<std::size_t>(std::popcount(occupancy)); }
  int parity() const { return static_cast<int>(fermion_number() & 1U); }
  bool occupied(std::size_t i) const { return (occupancy >> i) & 1U; }

  friend auto operator<=>(const FockState&, const FockState&) = default;
};

enum class ModeAction { create, annihilate };

struct SignedState {
  int sign = 1;
  FockState state;
};

// Applies a_i^dagger or a_i with sign (-1)^(occupied modes below i).
// Returns nullopt when the result vanishes.
std::optional<SignedState> apply_mode(ModeAction action, std::size_t i, const FockState& s);

// Bit-level variant used by hot loops: returns false when the result is zero.
inline bool apply_mode_bits(bool create, std::size_t i, std::uint64_t& word, int& sign) {
  const std::uint64_t bit = std::uint64_t{1} << i;
  if (create == static_cast<bool>(word & bit)) return false;
  if (std::popcount(word & (bit - 1)) & 1) sign = -sign;
  word ^= bit;
  return true;
}

// Forbidden monomials: a state is allowed iff no listed set is fully occupied.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<std::vector<std::size_t>> forbidden);

  const std::vector<std::vector<std::size_t>>& forbidden() const { return forbidden_; }
  const std::vector<std::uint64_t>& masks() const { return masks_; }
  bool empty() const { return masks_.empty(); }
  bool allows(std::uint64_t word) const {
    for (std::uint64_t m : masks_)
      if ((word & m) == m) return false;
    return true;
  }
  // Largest referenced mode + 1 (0 when empty).
  std::size_t span() const { return span_; }

 private:
  std::vector<std::vector<std::size_t>> forbidden_;
  std::vector<std::uint64_t> masks_;
  std::size_t span_ = 0;
};

// Pairs of modes (2s, 2s+1) per site. The first `free_sites` sites are
// unconstrained, each later site forbids double occupation.
struct DualRailLayout {
  std::size_t free_sites = 0;
  std::size_t exclusive_sites = 0;

  std::size_t sites() const { return free_sites + exclusive_sites; }
  std::size_t modes() const { return 2 * sites(); }
  friend bool operator==(const DualRailLayout&, const DualRailLayout&) = default;
};

// Sorted (ascending by word) basis of one fermion-number sector.
class SectorBasis {
 public:
  explicit SectorBasis(std::vector<std::uint64_t> words, std::size_t modes)
      : words_(std::move(words)), modes_(modes) {}

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<std::uint64_t>& words() const { return words_; }
  FockState state(std::size_t k) const { return {words_.at(k), modes_}; }
  std::optional<std::size_t> index_of(std::uint64_t word) const;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t modes_;
};

// Fock space on m modes restricted by constraints and graded by fermion
// number. Sector bases are enumerated lazily and cached; the cache is shared
// between copies and safe to fill concurrently.
class GradedSpace {
 public:
  explicit GradedSpace(std::size_t modes, ConstraintSet constraints = {},
                       std::size_t cap = default_mode_cap());
  static GradedSpace dual_rail(DualRailLayout layout, std::size_t cap = default_mode_cap());

  std::size_t modes() const { return modes_; }
  std::size_t mode_cap() const { return cap_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const std::optional<DualRailLayout>& layout() const { return layout_; }
  std::size_t sector_count() const { return modes_ + 1; }

  bool member(const FockState& s) const;
  bool member_word(std::uint64_t word) const {
    return (word & ~full_mask()) == 0 && constraints_.allows(word);
  }

  const SectorBasis& sector_basis(std::size_t l) const;
  std::size_t dimension(std::size_t l) const { return sector_basis(l).size(); }
  std::vector<std::size_t> dimensions() const;
  std::size_t total_dimension() const;

  // Uniform draw from sector l. Unconstrained spaces sample directly,
  // dual-rail spaces use a constructive site sampler, everything else uses
  // rejection from uniform weight-l words. max_tries == 0 picks
  // 64 * ceil(2^m / dim V^l) capped at 2^26.
  FockState sample_sector(std::size_t l, std::mt19937_64& rng, std::size_t max_tries = 0) const;

  std::uint64_t full_mask() const {
    return modes_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << modes_) - 1;
  }

 private:
  struct Cache;
  std::size_t modes_;
  ConstraintSet constraints_;
  std::size_t cap_;
  std::optional<DualRailLayout> layout_;
  std::shared_ptr<Cache> cache_;

  FockState sample_dual_rail(std::size_t l, std::mt19937_64& rng) const;
};

}  // namespace susyhom

#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "susyhom/exact.hpp"
#include "susyhom/fock.hpp"

namespace susyhom {

struct Factor {
  std::size_t mode = 0;
  bool creation = false;

  static Factor create(std::size_t i) { return {i, true}; }
  static Factor annihilate(std::size_t i) { return {i, false}; }
  friend auto operator<=>(const Factor&, const Factor&) = default;
};

// Canonical monomial: creations in descending mode order, then annihilations
// in ascending mode order, no repeated factor.
struct FermionTerm {
  ExactComplex coefficient;
  std::vector<Factor> factors;

  // Number of distinct modes touched.
  std::size_t locality() const;
  // #creations - #annihilations.
  int grading() const;
};

using Amplitudes = std::map<FockState, ExactComplex>;

// Polynomial in creation/annihilation operators on a fixed number of modes.
// Coefficients are exact; an overall factor (1/sqrt 2)^k is carried
// symbolically so lifted supercharges stay exact.
class FermionOperator {
 public:
  explicit FermionOperator(std::size_t modes = 0);
  // Normal-orders and merges arbitrary products into canonical terms.
  FermionOperator(std::size_t modes, const std::vector<FermionTerm>& products,
                  int inv_sqrt2_power = 0);

  static FermionOperator identity(std::size_t modes);
  static FermionOperator creation(std::size_t modes, std::size_t i);
  static FermionOperator annihilation(std::size_t modes, std::size_t i);
  static FermionOperator number(std::size_t modes, std::size_t i);

  std::size_t modes() const { return modes_; }
  const std::vector<FermionTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int inv_sqrt2_power() const { return inv_sqrt2_power_; }
  // (1/sqrt 2)^k as a double.
  double scale() const;

  // Common grading of all terms; nullopt for mixed gradings. Zero has none.
  std::optional<int> grading() const;
  std::size_t locality() const;

  FermionOperator adjoint() const;
  FermionOperator scaled(const ExactComplex& c) const;
  // Multiplies by (1/sqrt 2)^k symbolically.
  FermionOperator with_inv_sqrt2(int k) const;

  // Sparse image of a basis state (the symbolic scale is not applied).
  Amplitudes apply(const FockState& s) const;

  friend FermionOperator operator+(const FermionOperator& a, const FermionOperator& b);
  friend FermionOperator operator-(const FermionOperator& a, const FermionOperator& b);
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b);
  friend bool operator==(const FermionOperator& a, const FermionOperator& b);

 private:
  std::size_t modes_;
  std::vector<FermionTerm> terms_;
  int inv_sqrt2_power_ = 0;

  void fold_scale();
};

FermionOperator compose(const FermionOperator& a, const FermionOperator& b);
FermionOperator anticommutator(const FermionOperator& a, const FermionOperator& b);
FermionOperator commutator(const FermionOperator& a, const FermionOperator& b);

// Normal-orders a single product into canonical terms.
std::vector<FermionTerm> normal_order(const ExactComplex& coefficient, std::vector<Factor> factors);

// Text form: optional "modes <m>" and "scale inv_sqrt2^<k>" header lines, then
// one term per line "<coef> [+i|-i ...]" with +i = a_i^dagger, -i = a_i,
// factors written left to right. '#' starts a comment.
std::string to_text(const FermionOperator& op);
FermionOperator parse_fermion_operator(std::istream& in, std::optional<std::size_t> modes = std::nullopt);
FermionOperator parse_fermion_operator(const std::string& text,
                                       std::optional<std::size_t> modes = std::nullopt);

}  // namespace susyhom

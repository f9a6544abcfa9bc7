#include "susyhom/operators.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "susyhom/errors.hpp"

namespace susyhom {

namespace {

// Position in canonical order: creations by descending mode, then
// annihilations by ascending mode.
std::pair<int, long> canonical_rank(const Factor& f) {
  return f.creation ? std::pair<int, long>{0, -static_cast<long>(f.mode)}
                    : std::pair<int, long>{1, static_cast<long>(f.mode)};
}

using TermMap = std::map<std::vector<Factor>, ExactComplex>;

void accumulate(TermMap& into, const std::vector<Factor>& factors, const ExactComplex& c) {
  auto [it, inserted] = into.try_emplace(factors, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  } else if (c.is_zero()) {
    into.erase(it);
  }
}

void normal_order_into(TermMap& out, const ExactComplex& coefficient, std::vector<Factor> factors) {
  std::vector<std::pair<ExactComplex, std::vector<Factor>>> stack;
  stack.emplace_back(coefficient, std::move(factors));
  while (!stack.empty()) {
    auto [c, f] = std::move(stack.back());
    stack.pop_back();
    if (c.is_zero()) continue;
    std::size_t i = 0;
    bool vanished = false;
    for (; i + 1 < f.size(); ++i) {
      auto a = canonical_rank(f[i]);
      auto b = canonical_rank(f[i + 1]);
      if (a == b) {
        vanished = true;  // a_i a_i = a_i^dag a_i^dag = 0
        break;
      }
      if (a > b) break;
    }
    if (vanished) continue;
    if (i + 1 >= f.size()) {
      accumulate(out, f, c);
      continue;
    }
    const Factor x = f[i];
    const Factor y = f[i + 1];
    std::vector<Factor> swapped = f;
    std::swap(swapped[i], swapped[i + 1]);
    if (!x.creation && y.creation && x.mode == y.mode) {
      std::vector<Factor> contracted;
      contracted.reserve(f.size() - 2);
      contracted.insert(contracted.end(), f.begin(), f.begin() + static_cast<long>(i));
      contracted.insert(contracted.end(), f.begin() + static_cast<long>(i) + 2, f.end());
      stack.emplace_back(c, std::move(contracted));
    }
    stack.emplace_back(-c, std::move(swapped));
  }
}

std::vector<FermionTerm> to_terms(TermMap&& map) {
  std::vector<FermionTerm> terms;
  terms.reserve(map.size());
  for (auto& [f, c] : map) terms.push_back({std::move(c), f});
  return terms;
}

TermMap to_map(const std::vector<FermionTerm>& terms) {
  TermMap m;
  for (const auto& t : terms) accumulate(m, t.factors, t.coefficient);
  return m;
}

// Fast product of canonical monomials held as (creation mask, annihilation
// mask). Coefficients are brought to Gaussian integers over a common
// denominator; numerators below 2^31 keep every partial sum inside __int128.
struct Monomial {
  std::uint64_t c = 0;
  std::uint64_t a = 0;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.c * 0x9e3779b97f4a7c15ULL ^ (m.a + 0x632be59bd9b4e019ULL));
  }
};

struct IntegerForm {
  std::vector<Monomial> monomials;
  std::vector<std::pair<std::int64_t, std::int64_t>> numerators;
  BigInt denominator{1};
};

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }
std::uint64_t below(std::size_t i) { return bit(i) - 1; }
std::uint64_t above(std::size_t i) { return i >= 63 ? 0 : ~((bit(i) << 1) - 1); }
int parity(std::uint64_t x) { return std::popcount(x) & 1; }

std::optional<IntegerForm> integer_form(const std::vector<FermionTerm>& terms) {
  IntegerForm out;
  for (const auto& t : terms) {
    for (const Rational* q : {&t.coefficient.re, &t.coefficient.im})
      out.denominator = boost::multiprecision::lcm(out.denominator, BigInt(boost::multiprecision::denominator(*q)));
  }
  const BigInt limit = BigInt(1) << 31;
  for (const auto& t : terms) {
    Monomial m;
    for (const auto& f : t.factors) (f.creation ? m.c : m.a) |= bit(f.mode);
    const Rational re = t.coefficient.re * out.denominator, im = t.coefficient.im * out.denominator;
    const BigInt nr = boost::multiprecision::numerator(re), ni = boost::multiprecision::numerator(im);
    if (abs(nr) >= limit || abs(ni) >= limit) return std::nullopt;
    out.monomials.push_back(m);
    out.numerators.emplace_back(nr.convert_to<std::int64_t>(), ni.convert_to<std::int64_t>());
  }
  return out;
}

BigInt to_bigint(__int128 v) {
  const bool negative = v < 0;
  const unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = BigInt(static_cast<std::uint64_t>(u >> 64)) << 64;
  r += BigInt(static_cast<std::uint64_t>(u));
  return negative ? BigInt(-r) : r;
}

// x * y as signed canonical monomials. Creations of y are carried left one at
// a time (highest mode first, as they appear in the canonical string):
//   A_P a+_q = (-1)^|P| a+_q A_P + [q in P] (-1)^|P above q| A_{P \ q}.
template <class Emit>
void multiply_monomials(const Monomial& x, const Monomial& y, Emit&& emit) {
  struct Partial {
    std::uint64_t c, a;
    int odd;
  };
  thread_local std::vector<Partial> cur, next;
  cur.assign(1, Partial{x.c, x.a, 0});
  for (std::uint64_t rest = y.c; rest;) {
    const std::size_t q = 63 - static_cast<std::size_t>(std::countl_zero(rest));
    rest &= ~bit(q);
    next.clear();
    for (const auto& p : cur) {
      if (!(p.c & bit(q)))
        next.push_back({p.c | bit(q), p.a, p.odd ^ parity(p.a) ^ parity(p.c & below(q))});
      if (p.a & bit(q)) next.push_back({p.c, p.a & ~bit(q), p.odd ^ parity(p.a & above(q))});
    }
    std::swap(cur, next);
    if (cur.empty()) return;
  }
  for (const auto& p : cur) {
    if (p.a & y.a) continue;
    int odd = p.odd;
    for (std::uint64_t rest = y.a; rest; rest &= rest - 1)
      odd ^= parity(p.a & above(static_cast<std::size_t>(std::countr_zero(rest))));
    emit(Monomial{p.c, p.a | y.a}, odd);
  }
}

std::optional<std::vector<FermionTerm>> compose_fast(const std::vector<FermionTerm>& xs,
                                                     const std::vector<FermionTerm>& ys) {
  const auto fx = integer_form(xs);
  const auto fy = fx ? integer_form(ys) : std::nullopt;
  if (!fx || !fy) return std::nullopt;
  std::unordered_map<Monomial, std::pair<__int128, __int128>, MonomialHash> acc;
  acc.reserve(xs.size() + ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto [xr, xi] = fx->numerators[i];
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const auto [yr, yi] = fy->numerators[j];
      const __int128 pr = static_cast<__int128>(xr) * yr - static_cast<__int128>(xi) * yi;
      const __int128 pi = static_cast<__int128>(xr) * yi + static_cast<__int128>(xi) * yr;
      multiply_monomials(fx->monomials[i], fy->monomials[j], [&](const Monomial& m, int odd) {
        auto& slot = acc[m];
        slot.first += odd ? -pr : pr;
        slot.second += odd ? -pi : pi;
      });
    }
  }
  const BigInt denominator = fx->denominator * fy->denominator;
  std::vector<FermionTerm> terms;
  for (const auto& [m, v] : acc) {
    if (v.first == 0 && v.second == 0) continue;
    FermionTerm t{ExactComplex(Rational(to_bigint(v.first), denominator), Rational(to_bigint(v.second), denominator)),
                  {}};
    for (std::size_t k = 64; k-- > 0;)
      if (m.c & bit(k)) t.factors.push_back(Factor::create(k));
    for (std::size_t k = 0; k < 64; ++k)
      if (m.a & bit(k)) t.factors.push_back(Factor::annihilate(k));
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace

std::size_t FermionTerm::locality() const {
  std::set<std::size_t> modes;
  for (const auto& f : factors) modes.insert(f.mode);
  return modes.size();
}

int FermionTerm::grading() const {
  int g = 0;
  for (const auto& f : factors) g += f.creation ? 1 : -1;
  return g;
}

std::vector<FermionTerm> normal_order(const ExactComplex& coefficient, std::vector<Factor> factors) {
  TermMap out;
  normal_order_into(out, coefficient, std::move(factors));
  return to_terms(std::move(out));
}

FermionOperator::FermionOperator(std::size_t modes) : modes_(modes) {
  if (modes > kMaxModes) throw InputError("at most 64 modes are supported");
}

FermionOperator::FermionOperator(std::size_t modes, const std::vector<FermionTerm>& products,
                                 int inv_sqrt2_power)
    : modes_(modes), inv_sqrt2_power_(inv_sqrt2_power) {
  if (modes > kMaxModes) throw InputError("at most 64 modes are supported");
  TermMap out;
  for (const auto& p : products) {
    for (const auto& f : p.factors)
      if (f.mode >= modes)
        throw InputError("factor on mode " + std::to_string(f.mode) + " but operator has " +
                         std::to_string(modes) + " modes");
    normal_order_into(out, p.coefficient, p.factors);
  }
  terms_ = to_terms(std::move(out));
  fold_scale();
}

void FermionOperator::fold_scale() {
  if (terms_.empty()) {
    inv_sqrt2_power_ = 0;
    return;
  }
  while (inv_sqrt2_power_ >= 2) {
    for (auto& t : terms_) {
      t.coefficient.re /= 2;
      t.coefficient.im /= 2;
    }
    inv_sqrt2_power_ -= 2;
  }
  while (inv_sqrt2_power_ < 0) {
    for (auto& t : terms_) {
      t.coefficient.re *= 2;
      t.coefficient.im *= 2;
    }
    inv_sqrt2_power_ += 2;
  }
}

FermionOperator FermionOperator::identity(std::size_t modes) {
  return FermionOperator(modes, {{ExactComplex(1), {}}});
}

FermionOperator FermionOperator::creation(std::size_t modes, std::size_t i) {
  return FermionOperator(modes, {{ExactComplex(1), {Factor::create(i)}}});
}

FermionOperator FermionOperator::annihilation(std::size_t modes, std::size_t i) {
  return FermionOperator(modes, {{ExactComplex(1), {Factor::annihilate(i)}}});
}

FermionOperator FermionOperator::number(std::size_t modes, std::size_t i) {
  return FermionOperator(modes, {{ExactComplex(1), {Factor::create(i), Factor::annihilate(i)}}});
}

double FermionOperator::scale() const { return std::pow(std::sqrt(0.5), inv_sqrt2_power_); }

std::optional<int> FermionOperator::grading() const {
  std::optional<int> g;
  for (const auto& t : terms_) {
    int tg = t.grading();
    if (g && *g != tg) return std::nullopt;
    g = tg;
  }
  return g;
}

std::size_t FermionOperator::locality() const {
  std::size_t k = 0;
  for (const auto& t : terms_) k = std::max(k, t.locality());
  return k;
}

FermionOperator FermionOperator::adjoint() const {
  std::vector<FermionTerm> products;
  products.reserve(terms_.size());
  for (const auto& t : terms_) {
    FermionTerm a{t.coefficient.conj(), {}};
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
      a.factors.push_back({it->mode, !it->creation});
    products.push_back(std::move(a));
  }
  return FermionOperator(modes_, products, inv_sqrt2_power_);
}

FermionOperator FermionOperator::scaled(const ExactComplex& c) const {
  FermionOperator r(modes_);
  r.inv_sqrt2_power_ = inv_sqrt2_power_;
  if (c.is_zero()) return FermionOperator(modes_);
  for (const auto& t : terms_) r.terms_.push_back({t.coefficient * c, t.factors});
  r.fold_scale();
  return r;
}

FermionOperator FermionOperator::with_inv_sqrt2(int k) const {
  FermionOperator r = *this;
  r.inv_sqrt2_power_ += k;
  r.fold_scale();
  return r;
}

Amplitudes FermionOperator::apply(const FockState& s) const {
  if (s.modes != modes_)
    throw InputError("state has " + std::to_string(s.modes) + " modes, operator has " +
                     std::to_string(modes_));
  Amplitudes out;
  for (const auto& t : terms_) {
    std::uint64_t word = s.occupancy;
    int sign = 1;
    bool alive = true;
    for (auto it = t.factors.rbegin(); it != t.factors.rend() && alive; ++it)
      alive = apply_mode_bits(it->creation, it->mode, word, sign);
    if (!alive) continue;
    FockState target(word, modes_);
    auto [pos, inserted] = out.try_emplace(target);
    if (sign > 0)
      pos->second += t.coefficient;
    else
      pos->second -= t.coefficient;
    if (pos->second.is_zero()) out.erase(pos);
  }
  return out;
}

namespace {

void require_same_modes(const FermionOperator& a, const FermionOperator& b) {
  if (a.modes() != b.modes())
    throw InputError("operators act on " + std::to_string(a.modes()) + " and " +
                     std::to_string(b.modes()) + " modes");
}

// Brings b to a's symbolic scale; throws when the two differ by an odd power.
std::vector<FermionTerm> aligned_terms(const FermionOperator& a, const FermionOperator& b) {
  if (a.is_zero() || b.is_zero() || a.inv_sqrt2_power() == b.inv_sqrt2_power()) return b.terms();
  throw InputError("cannot add operators whose scales differ by a factor sqrt(2)");
}

}  // namespace

FermionOperator operator+(const FermionOperator& a, const FermionOperator& b) {
  require_same_modes(a, b);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  TermMap m = to_map(a.terms());
  for (const auto& t : aligned_terms(a, b)) accumulate(m, t.factors, t.coefficient);
  FermionOperator r(a.modes());
  r.terms_ = to_terms(std::move(m));
  r.inv_sqrt2_power_ = a.inv_sqrt2_power_;
  r.fold_scale();
  return r;
}

FermionOperator operator-(const FermionOperator& a, const FermionOperator& b) {
  return a + b.scaled(ExactComplex(-1));
}

FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) { return compose(a, b); }

bool operator==(const FermionOperator& a, const FermionOperator& b) {
  if (a.modes_ != b.modes_ || a.terms_.size() != b.terms_.size()) return false;
  if (a.is_zero()) return true;
  if (a.inv_sqrt2_power_ != b.inv_sqrt2_power_) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].factors != b.terms_[i].factors || !(a.terms_[i].coefficient == b.terms_[i].coefficient))
      return false;
  return true;
}

FermionOperator compose(const FermionOperator& a, const FermionOperator& b) {
  require_same_modes(a, b);
  if (auto fast = compose_fast(a.terms(), b.terms()))
    return FermionOperator(a.modes(), *fast, a.inv_sqrt2_power() + b.inv_sqrt2_power());
  TermMap out;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      std::vector<Factor> f = x.factors;
      f.insert(f.end(), y.factors.begin(), y.factors.end());
      normal_order_into(out, x.coefficient * y.coefficient, std::move(f));
    }
  }
  std::vector<FermionTerm> terms = to_terms(std::move(out));
  // Terms are already canonical; the constructor only re-merges them.
  return FermionOperator(a.modes(), terms, a.inv_sqrt2_power() + b.inv_sqrt2_power());
}

FermionOperator anticommutator(const FermionOperator& a, const FermionOperator& b) {
  return compose(a, b) + compose(b, a);
}

FermionOperator commutator(const FermionOperator& a, const FermionOperator& b) {
  return compose(a, b) - compose(b, a);
}

std::string to_text(const FermionOperator& op) {
  std::ostringstream out;
  out << "modes " << op.modes() << "\n";
  if (op.inv_sqrt2_power() != 0) out << "scale inv_sqrt2^" << op.inv_sqrt2_power() << "\n";
  for (const auto& t : op.terms()) {
    out << format_exact_complex(t.coefficient);
    for (const auto& f : t.factors) out << ' ' << (f.creation ? '+' : '-') << f.mode;
    out << "\n";
  }
  return out.str();
}

FermionOperator parse_fermion_operator(std::istream& in, std::optional<std::size_t> modes) {
  std::vector<FermionTerm> products;
  int k = 0;
  std::size_t max_mode_plus_one = 0;
  std::optional<std::size_t> declared;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw InputError("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "modes") {
      std::size_t m = 0;
      if (!(ls >> m)) fail("expected mode count after 'modes'");
      declared = m;
      continue;
    }
    if (first == "scale") {
      std::string s;
      ls >> s;
      const std::string prefix = "inv_sqrt2^";
      if (s.rfind(prefix, 0) != 0) fail("expected 'scale inv_sqrt2^<k>'");
      try {
        k = std::stoi(s.substr(prefix.size()));
      } catch (const std::exception&) {
        fail("bad scale exponent");
      }
      continue;
    }
    FermionTerm term;
    try {
      term.coefficient = parse_exact_complex(first);
    } catch (const InputError& e) {
      fail(e.what());
    }
    std::string tok;
    while (ls >> tok) {
      if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-')) fail("bad factor '" + tok + "'");
      std::size_t mode = 0;
      try {
        std::size_t used = 0;
        mode = std::stoul(tok.substr(1), &used);
        if (used != tok.size() - 1) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail("bad factor '" + tok + "'");
      }
      max_mode_plus_one = std::max(max_mode_plus_one, mode + 1);
      term.factors.push_back({mode, tok[0] == '+'});
    }
    products.push_back(std::move(term));
  }
  std::size_t m = modes.value_or(declared.value_or(max_mode_plus_one));
  if (declared && modes && *declared != *modes)
    throw InputError("operator declares " + std::to_string(*declared) + " modes, expected " +
                     std::to_string(*modes));
  if (max_mode_plus_one > m)
    throw InputError("factor on mode " + std::to_string(max_mode_plus_one - 1) + " exceeds " +
                     std::to_string(m) + " modes");
  return FermionOperator(m, products, k);
}

FermionOperator parse_fermion_operator(const std::string& text, std::optional<std::size_t> modes) {
  std::istringstream in(text);
  return parse_fermion_operator(in, modes);
}

}  // namespace susyhom

#include "susyhom/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "susyhom/errors.hpp"

namespace susyhom {

PauliHamiltonian::PauliHamiltonian(std::size_t qubits, std::vector<PauliTerm> terms)
    : qubits_(qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw InputError("non-finite Pauli coefficient");
    for (const auto& [q, p] : t.ops)
      if (q >= qubits_)
        throw InputError("Pauli term acts on qubit " + std::to_string(q) + " of a " + std::to_string(qubits_) +
                         "-qubit Hamiltonian");
  }
}

std::size_t PauliHamiltonian::locality() const {
  std::size_t k = 0;
  for (const auto& t : terms_) k = std::max(k, t.ops.size());
  return k;
}

double PauliHamiltonian::one_norm() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

DenseMatrix PauliHamiltonian::matrix() const {
  if (qubits_ > 12) throw CapExceeded("dense Pauli matrix limited to 12 qubits");
  const std::size_t dim = std::size_t{1} << qubits_;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::complex<double> i(0, 1);
  for (const auto& t : terms_) {
    for (std::size_t x = 0; x < dim; ++x) {
      std::size_t y = x;
      std::complex<double> amp = t.coefficient;
      for (const auto& [q, p] : t.ops) {
        const bool bit = (x >> q) & 1U;
        switch (p) {
          case Pauli::X:
            y ^= std::size_t{1} << q;
            break;
          case Pauli::Y:
            y ^= std::size_t{1} << q;
            amp *= bit ? -i : i;
            break;
          case Pauli::Z:
            if (bit) amp = -amp;
            break;
        }
      }
      m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += amp;
    }
  }
  return m;
}

PauliHamiltonian parse_pauli_hamiltonian(std::istream& in, std::optional<std::size_t> qubits) {
  std::vector<PauliTerm> terms;
  std::size_t needed = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    auto fail = [&](const std::string& what) { throw InputError("line " + std::to_string(line_no) + ": " + what); };
    PauliTerm term;
    try {
      std::size_t used = 0;
      term.coefficient = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(term.coefficient)) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail("bad coefficient '" + tok + "'");
    }
    std::vector<std::string> rest;
    while (ls >> tok) rest.push_back(tok);
    if (rest.size() == 1 && rest[0] == "I") {
      terms.push_back(std::move(term));
      continue;
    }
    if (rest.empty() || rest.size() % 2 != 0) fail("expected 'coef P q [P q ...]' or 'coef I'");
    for (std::size_t k = 0; k < rest.size(); k += 2) {
      const std::string& p = rest[k];
      if (p != "X" && p != "Y" && p != "Z") fail("unknown Pauli '" + p + "'");
      std::size_t q = 0;
      try {
        std::size_t used = 0;
        long long v = std::stoll(rest[k + 1], &used);
        if (used != rest[k + 1].size() || v < 0) throw std::invalid_argument(rest[k + 1]);
        q = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        fail("bad qubit index '" + rest[k + 1] + "'");
      }
      if (term.ops.count(q)) fail("qubit " + std::to_string(q) + " repeated in one term");
      term.ops[q] = static_cast<Pauli>(p[0]);
      needed = std::max(needed, q + 1);
    }
    terms.push_back(std::move(term));
  }
  if (qubits && *qubits < needed)
    throw InputError("term acts on qubit " + std::to_string(needed - 1) + " but only " + std::to_string(*qubits) +
                     " qubits were declared");
  return PauliHamiltonian(qubits.value_or(needed), std::move(terms));
}

PauliHamiltonian read_pauli_file(const std::string& path, std::optional<std::size_t> qubits) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open Hamiltonian file '" + path + "'");
  try {
    return parse_pauli_hamiltonian(in, qubits);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

FockState dualrail_encode(const std::vector<int>& bits, std::size_t site_offset) {
  const std::size_t sites = bits.size() + site_offset;
  if (2 * sites > kMaxModes) throw InputError("dual-rail register exceeds 64 modes");
  std::uint64_t word = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] != 0 && bits[q] != 1) throw InputError("dual-rail bits must be 0 or 1");
    word |= std::uint64_t{1} << (2 * (q + site_offset) + static_cast<std::size_t>(bits[q]));
  }
  return {word, 2 * sites};
}

namespace {

std::size_t mode_a(std::size_t site) { return 2 * site; }
std::size_t mode_b(std::size_t site) { return 2 * site + 1; }

FermionOperator site_pauli(std::size_t modes, std::size_t site, Pauli p) {
  const Factor ad = Factor::create(mode_a(site)), a = Factor::annihilate(mode_a(site));
  const Factor bd = Factor::create(mode_b(site)), b = Factor::annihilate(mode_b(site));
  const ExactComplex i = ExactComplex::imaginary_unit();
  switch (p) {
    case Pauli::X:
      return FermionOperator(modes, {{1, {ad, b}}, {1, {bd, a}}});
    case Pauli::Y:
      return FermionOperator(modes, {{-i, {ad, b}}, {i, {bd, a}}});
    case Pauli::Z:
      return FermionOperator(modes, {{1, {ad, a}}, {-1, {bd, b}}});
  }
  throw InputError("unknown Pauli");
}

Rational ceil_rational(const Rational& q) {
  BigInt num = numerator(q), den = denominator(q);
  BigInt f = num / den;
  if (f * den != num && num > 0) f += 1;
  return Rational(f);
}

}  // namespace

FermionOperator pauli_to_fermion(const PauliHamiltonian& a, std::size_t site_offset) {
  const std::size_t modes = 2 * (a.qubits() + site_offset);
  if (modes > kMaxModes) throw InputError("dual-rail register exceeds 64 modes");
  FermionOperator out(modes);
  for (const auto& t : a.terms()) {
    FermionOperator term = FermionOperator::identity(modes).scaled(ExactComplex::from_double(t.coefficient));
    for (const auto& [q, p] : t.ops) term = compose(term, site_pauli(modes, q + site_offset, p));
    out = out + term;
  }
  return out;
}

FermionOperator penalty(std::size_t sites, const Rational& j, std::size_t first_site) {
  const std::size_t modes = 2 * (sites + first_site);
  if (modes > kMaxModes) throw InputError("dual-rail register exceeds 64 modes");
  std::vector<FermionTerm> products;
  for (std::size_t s = first_site; s < first_site + sites; ++s) {
    const Factor ad = Factor::create(mode_a(s)), a = Factor::annihilate(mode_a(s));
    const Factor bd = Factor::create(mode_b(s)), b = Factor::annihilate(mode_b(s));
    // n_a n_b + (n_a - 1)(n_b - 1) = 2 n_a n_b - n_a - n_b + 1
    products.push_back({ExactComplex(Rational(2 * j)), {ad, a, bd, b}});
    products.push_back({ExactComplex(Rational(-j)), {ad, a}});
    products.push_back({ExactComplex(Rational(-j)), {bd, b}});
    products.push_back({ExactComplex(j), {}});
  }
  return FermionOperator(modes, products);
}

Rational default_penalty_strength(const PauliHamiltonian& a) {
  Rational total = 0;
  for (const auto& t : a.terms()) total += abs(rational_from_double(t.coefficient));
  return 1 + ceil_rational(total);
}

FermionOperator lifted_bosonic_part(const PauliHamiltonian& a, const Rational& j) {
  return pauli_to_fermion(a, 1) + penalty(a.qubits(), j, 1);
}

namespace {

// (a_0^dag + b_0^dag) / sqrt 2 composed with `body`.
FermionOperator auxiliary_creation(const FermionOperator& body) {
  const std::size_t m = body.modes();
  FermionOperator c = FermionOperator::creation(m, mode_a(0)) + FermionOperator::creation(m, mode_b(0));
  return compose(c, body).with_inv_sqrt2(1);
}

}  // namespace

CochainComplex susy_lift(const PauliHamiltonian& a, std::optional<Rational> j, std::size_t cap) {
  const Rational strength = j.value_or(default_penalty_strength(a));
  FermionOperator body = lifted_bosonic_part(a, strength);
  GradedSpace space(body.modes(), {}, cap);
  return CochainComplex(std::move(space), auxiliary_creation(body));
}

LiftedComplex constrained_lift(const PauliHamiltonian& a, std::size_t cap) {
  FermionOperator body = pauli_to_fermion(a, 1);
  GradedSpace space = GradedSpace::dual_rail({1, a.qubits()}, cap);
  return {CochainComplex(std::move(space), auxiliary_creation(body)), a.qubits() + 2};
}

LiftedComplex ksat_complex(const std::vector<PauliHamiltonian>& projectors, std::size_t cap) {
  if (projectors.empty()) throw InputError("no clauses given");
  std::size_t n = 0;
  for (const auto& p : projectors) n = std::max(n, p.qubits());
  std::vector<PauliTerm> all;
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    PauliHamiltonian p(n, projectors[k].terms());
    DenseMatrix m = p.matrix();
    const double err = m.size() ? (m * m - m).cwiseAbs().maxCoeff() : 0.0;
    if (err > 1e-10) throw PreconditionError("clause " + std::to_string(k) + " is not a projector");
    all.insert(all.end(), p.terms().begin(), p.terms().end());
  }
  return constrained_lift(PauliHamiltonian(n, std::move(all)), cap);
}

SquaredSpectrumCheck verify_squared_spectrum(const PauliHamiltonian& a, const CochainComplex& c, std::size_t l,
                                             double tol) {
  SquaredSpectrumCheck r;
  for (double v : hermitian_eigenvalues(a.matrix())) r.expected.push_back(v * v);
  std::sort(r.expected.begin(), r.expected.end());
  r.laplacian_spectrum = c.dimension(l) ? spectrum(laplacian(c, l)) : std::vector<double>{};
  if (r.laplacian_spectrum.size() != r.expected.size()) {
    r.max_deviation = kNoGap;
    return r;
  }
  double scale = 1;
  for (double v : r.expected) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < r.expected.size(); ++k)
    r.max_deviation = std::max(r.max_deviation, std::abs(r.expected[k] - r.laplacian_spectrum[k]));
  r.pass = r.max_deviation <= tol * scale;
  return r;
}

}  // namespace susyhom

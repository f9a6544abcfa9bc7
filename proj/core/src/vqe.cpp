#include "susyhom/vqe.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/parallel.hpp"

namespace susyhom {

void AnsatzSpec::validate() const {
  if (layers == 0) throw InputError("ansatz needs at least one layer");
  if (params.size() != parameter_count())
    throw InputError("ansatz expects " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(params.size()));
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (!groups[j].is_hermitian()) throw InputError("ansatz group " + std::to_string(j) + " is not Hermitian");
    if (!groups[j].is_commuting())
      throw InputError("ansatz group " + std::to_string(j) + " contains anticommuting strings");
  }
}

namespace {

PauliString parse_pauli_string(const std::string& text) {
  PauliString p;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw InputError("bad Pauli factor '" + tok + "'");
    std::size_t q = 0;
    try {
      std::size_t used = 0;
      q = std::stoul(tok.substr(1), &used);
      if (used != tok.size() - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("bad Pauli factor '" + tok + "'");
    }
    PauliString s = PauliString::single(q, tok[0]);
    if ((p.x | p.z) & (s.x | s.z)) throw InputError("qubit repeated in '" + text + "'");
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

}  // namespace

std::string to_json(const AnsatzSpec& spec) {
  nlohmann::json groups = nlohmann::json::array();
  std::size_t qubits = 0;
  for (const auto& g : spec.groups) {
    qubits = std::max(qubits, g.qubits());
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, c] : g.terms())
      terms.push_back({p.to_string(), detail::json_number(c.real()), detail::json_number(c.imag())});
    groups.push_back(terms);
  }
  nlohmann::json params = nlohmann::json::array();
  for (double t : spec.params) params.push_back(detail::json_number(t));
  nlohmann::json j;
  j["groups"] = groups;
  j["layers"] = spec.layers;
  j["params"] = params;
  j["seed"] = spec.seed;
  j["qubits"] = qubits;
  return j.dump();
}

AnsatzSpec ansatz_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    AnsatzSpec spec;
    const std::size_t qubits = j.at("qubits").get<std::size_t>();
    for (const auto& g : j.at("groups")) {
      QubitOperator op(qubits);
      for (const auto& t : g)
        op.add(parse_pauli_string(t.at(0).get<std::string>()), {t.at(1).get<double>(), t.at(2).get<double>()});
      spec.groups.push_back(std::move(op));
    }
    spec.layers = j.at("layers").get<std::size_t>();
    spec.params = j.at("params").get<std::vector<double>>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed ansatz JSON: ") + e.what());
  }
}

std::uint64_t initial_sector_state(const GradedSpace& space, std::size_t l) {
  const SectorBasis& b = space.sector_basis(l);
  if (b.empty()) throw PreconditionError("sector " + std::to_string(l) + " is empty");
  return b.words().front();
}

Statevector basis_state(std::size_t qubits, std::uint64_t index) {
  if (qubits > kStatevectorCap)
    throw CapExceeded(std::to_string(qubits) + " qubits exceed the statevector cap of " +
                      std::to_string(kStatevectorCap));
  const std::size_t dim = std::size_t{1} << qubits;
  if (index >= dim) throw InputError("basis index out of range");
  Statevector psi = Statevector::Zero(static_cast<Eigen::Index>(dim));
  psi[static_cast<Eigen::Index>(index)] = 1.0;
  return psi;
}

namespace {

// psi <- exp(i t H) psi for a commuting Hermitian group, one string at a time.
void apply_group_exponential(const QubitOperator& group, double t, Statevector& psi) {
  const std::complex<double> i(0.0, 1.0);
  const auto dim = static_cast<std::uint64_t>(psi.size());
  Statevector scratch(psi.size());
  for (const auto& [p, c] : group.terms()) {
    const double theta = t * c.real();
    if (p.is_identity()) {
      psi *= std::exp(i * theta);
      continue;
    }
    const double cs = std::cos(theta), sn = std::sin(theta);
    const std::complex<double> yph = std::pow(i, std::popcount(p.x & p.z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      std::complex<double> ph = (std::popcount(b & p.z) & 1) ? -yph : yph;
      scratch[static_cast<Eigen::Index>(b ^ p.x)] = ph * psi[static_cast<Eigen::Index>(b)];
    }
    psi = cs * psi + (i * sn) * scratch;
  }
}

Statevector evolve(const std::vector<QubitOperator>& groups, std::size_t layers, const std::vector<double>& params,
                   std::size_t qubits, std::uint64_t initial) {
  Statevector psi = basis_state(qubits, initial);
  for (std::size_t layer = 0; layer < layers; ++layer)
    for (std::size_t j = 0; j < groups.size(); ++j)
      apply_group_exponential(groups[j], params[layer * groups.size() + j], psi);
  return psi;
}

}  // namespace

Statevector ansatz_state(const AnsatzSpec& spec, std::size_t qubits, std::uint64_t initial) {
  spec.validate();
  for (const auto& g : spec.groups)
    if (g.qubits() != qubits) throw InputError("ansatz group acts on a different register");
  return evolve(spec.groups, spec.layers, spec.params, qubits, initial);
}

namespace {

struct Objective {
  const QubitOperator& h;
  const std::vector<QubitOperator>& groups;
  std::size_t layers;
  std::uint64_t initial;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  std::vector<double> trace;

  double operator()(const std::vector<double>& params) {
    const double e = h.expectation(evolve(groups, layers, params, h.qubits(), initial));
    if (e < best) best = e, best_x = params;
    trace.push_back(best);
    return e;
  }
};

constexpr double kPi = std::numbers::pi;

// Returns true when the sweep limit was hit.
bool coordinate_descent(Objective& f, std::vector<double>& x, const VqeOptions& o) {
  constexpr int kGrid = 16;
  constexpr double kGolden = 0.6180339887498949;
  double current = f(x);
  for (std::size_t sweep = 0; sweep < o.max_sweeps; ++sweep) {
    const double start = current;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double centre = x[j];
      const double h = 2 * kPi / kGrid;
      double best_t = centre, best_e = current;
      for (int k = -kGrid / 2; k < kGrid / 2; ++k) {
        if (k == 0) continue;
        x[j] = centre + k * h;
        const double e = f(x);
        if (e < best_e) best_e = e, best_t = x[j];
      }
      // Golden-section refinement around the best grid point.
      double a = best_t - h, b = best_t + h;
      double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
      x[j] = c;
      double fc = f(x);
      x[j] = d;
      double fd = f(x);
      for (int it = 0; it < 40 && b - a > 1e-10; ++it) {
        if (fc < fd) {
          b = d, d = c, fd = fc;
          c = b - kGolden * (b - a);
          x[j] = c;
          fc = f(x);
        } else {
          a = c, c = d, fc = fd;
          d = a + kGolden * (b - a);
          x[j] = d;
          fd = f(x);
        }
      }
      const double t = fc < fd ? c : d;
      const double e = std::min(fc, fd);
      if (e < best_e) best_e = e, best_t = t;
      x[j] = best_t;
      current = best_e;
    }
    if (start - current < o.tolerance) return false;
  }
  return true;
}

bool nelder_mead(Objective& f, std::vector<double>& x, const VqeOptions& o) {
  const std::size_t n = x.size();
  if (n == 0) {
    f(x);
    return false;
  }
  std::vector<std::vector<double>> simplex(n + 1, x);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += 0.5;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);
  const std::size_t max_evals = o.max_sweeps * 40 * (n + 1);
  std::size_t evals = n + 1;
  while (evals < max_evals) {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (values[worst] - values[best] < o.tolerance) {
      x = simplex[best];
      return false;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i : order)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    auto along = [&](double s) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + s * (simplex[worst][k] - centroid[k]);
      return p;
    };
    auto reflected = along(-1.0);
    const double fr = f(reflected);
    ++evals;
    if (fr < values[best]) {
      auto expanded = along(-2.0);
      const double fe = f(expanded);
      ++evals;
      if (fe < fr) simplex[worst] = expanded, values[worst] = fe;
      else simplex[worst] = reflected, values[worst] = fr;
    } else if (fr < values[second]) {
      simplex[worst] = reflected, values[worst] = fr;
    } else {
      auto contracted = along(0.5);
      const double fc = f(contracted);
      ++evals;
      if (fc < values[worst]) {
        simplex[worst] = contracted, values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          values[i] = f(simplex[i]);
          ++evals;
        }
      }
    }
  }
  x = simplex[static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin())];
  return true;
}

}  // namespace

VqeResult vqe_run(const QubitOperator& h, const std::vector<QubitOperator>& groups, std::uint64_t initial,
                  const VqeOptions& options) {
  if (options.layers == 0) throw InputError("need at least one layer");
  if (options.restarts == 0) throw InputError("need at least one restart");
  if (h.qubits() > kStatevectorCap)
    throw CapExceeded(std::to_string(h.qubits()) + " qubits exceed the statevector cap of " +
                      std::to_string(kStatevectorCap));
  if (!h.is_hermitian()) throw InputError("Hamiltonian is not Hermitian");
  AnsatzSpec shape{groups, options.layers, std::vector<double>(options.layers * groups.size(), 0.0), options.seed};
  shape.validate();
  for (const auto& g : groups)
    if (g.qubits() != h.qubits()) throw InputError("ansatz group acts on a different register");
  basis_state(h.qubits(), initial);  // validates the initial index

  struct Run {
    double energy;
    std::vector<double> params, trace;
    bool stagnated;
  };
  std::vector<Run> runs(options.restarts);
  parallel_for(options.restarts, options.workers, [&](std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r), 0x76716eU};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<double> x(shape.parameter_count());
    for (auto& t : x) t = u(rng);
    Objective f{h, groups, options.layers, initial, std::numeric_limits<double>::infinity(), {}, {}};
    const bool stalled = options.optimizer == Optimizer::coordinate_descent ? coordinate_descent(f, x, options)
                                                                             : nelder_mead(f, x, options);
    runs[r] = {f.best, std::move(f.best_x), std::move(f.trace), stalled};
  });

  VqeResult out;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.restart_energies.push_back(runs[r].energy);
    out.evaluations += runs[r].trace.size();
    if (r == 0 || runs[r].energy < runs[out.best_restart].energy) out.best_restart = r;
  }
  Run& best = runs[out.best_restart];
  out.energy = best.energy;
  out.params = best.params;
  out.trace = std::move(best.trace);
  out.stagnated = best.stagnated;
  return out;
}

}  // namespace susyhom

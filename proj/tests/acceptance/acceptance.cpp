// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "susyhom/cochain.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/estimate.hpp"
#include "susyhom/graph_complex.hpp"
#include "susyhom/qubit.hpp"
#include "susyhom/reduction.hpp"
#include "susyhom/vqe.hpp"

using namespace susyhom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  std::printf("%s %2d %-28s %6.1f s  %s\n", v.pass ? "PASS" : "FAIL", id, name, seconds_since(t0),
              v.detail.str().c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

// Shared instance set for the first two criteria.
std::vector<Graph> random_graphs(std::size_t count, std::size_t min_n, std::size_t max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(min_n, max_n);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  std::vector<Graph> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = size(rng);
    out.push_back(oracle::random_graph(n, density(rng), rng));
  }
  return out;
}

// Labelled graphs up to five vertices plus random ones up to ten.
std::vector<Graph> hamiltonian_instances() {
  std::vector<Graph> out;
  for (std::size_t n = 1; n <= 5; ++n)
    for (auto& g : oracle::all_graphs(n)) out.push_back(std::move(g));
  for (auto& g : random_graphs(200, 6, 10, 3)) out.push_back(std::move(g));
  return out;
}

PauliHamiltonian random_two_local(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1, 1);
  std::uniform_int_distribution<std::size_t> qubit(0, n - 1), letter(0, 2), terms(1, 6);
  const Pauli letters[] = {Pauli::X, Pauli::Y, Pauli::Z};
  std::vector<PauliTerm> out;
  for (std::size_t t = terms(rng); t > 0; --t) {
    PauliTerm term{coef(rng), {}};
    term.ops[qubit(rng)] = letters[letter(rng)];
    const std::size_t q2 = qubit(rng);
    if (!term.ops.count(q2)) term.ops[q2] = letters[letter(rng)];
    out.push_back(term);
  }
  return PauliHamiltonian(n, out);
}

DenseMatrix kron_pauli(const PauliHamiltonian& a) {
  const Eigen::Index dim = Eigen::Index{1} << a.qubits();
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (const auto& t : a.terms()) {
    std::vector<char> letters(a.qubits(), 'I');
    for (const auto& [q, p] : t.ops) letters[q] = static_cast<char>(p);
    m += t.coefficient * oracle::pauli_kron(letters);
  }
  return m;
}

// Fermionic full-space matrix from the occupation-number action.
Eigen::MatrixXcd fermionic_matrix(const FermionOperator& op) {
  const std::size_t dim = std::size_t{1} << op.modes();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t w = 0; w < dim; ++w)
    for (const auto& [s, a] : op.apply(FockState(w, op.modes()))) m(s.occupancy, w) += a.to_complex();
  return m * op.scale();
}

double density(const std::vector<double>& spectrum, double x) {
  return static_cast<double>(std::count_if(spectrum.begin(), spectrum.end(), [&](double v) { return v <= x; })) /
         static_cast<double>(spectrum.size());
}

}  // namespace

int main() {
  const std::vector<Graph> graphs = random_graphs(200, 2, 12, 1);

  criterion(1, "nilpotency", [&](Verdict& v) {
    const auto t0 = Clock::now();
    std::size_t ok = 0;
    for (const Graph& g : graphs) {
      const FermionOperator d = hardcore_supercharge(g);
      ok += compose(d, d).is_zero() && nilpotency_residual(d, independence_space(g)) == 0.0;
    }
    const double t = seconds_since(t0);
    v.detail << ok << "/" << graphs.size() << " graphs, " << t << " s; ";
    v.require(ok == graphs.size(), "d^2 != 0");
    v.require(t < 30.0, "runtime above 30 s");
  });

  criterion(2, "hodge equivalence", [&](Verdict& v) {
    std::size_t ok = 0, sectors = 0;
    for (const Graph& g : graphs) {
      const CochainComplex c = independence_complex(g);
      const auto exact = betti_numbers(c, BettiMethod::exact_rank);
      const auto spectral = betti_numbers(c, BettiMethod::spectral, 1e-8);
      ok += exact == spectral;
      sectors += exact.size();
    }
    v.detail << ok << "/" << graphs.size() << " graphs, " << sectors << " sectors; ";
    v.require(ok == graphs.size(), "exact and spectral Betti numbers differ");
  });

  const std::vector<Graph> instances = hamiltonian_instances();

  criterion(3, "hamiltonian identity", [&](Verdict& v) {
    std::size_t ok = 0;
    for (const Graph& g : instances) {
      const CochainComplex c = independence_complex(g);
      const FermionOperator h = hardcore_hamiltonian(g);
      const bool small = g.vertices() <= 6;
      const FermionOperator anti = small ? anticommutator(c.differential(), c.differential().adjoint()) : h;
      bool same = true;
      for (std::size_t l = 0; l <= g.vertices() && same; ++l) {
        const ExactSparse hl = sector_matrix(h, c.space(), l);
        same = hl == laplacian_exact(c, l) && (!small || hl == sector_matrix(anti, c.space(), l));
      }
      ok += same;
    }
    v.detail << ok << "/" << instances.size() << " graphs; ";
    v.require(ok == instances.size(), "sector matrices differ");
  });

  criterion(4, "supersymmetric pairing", [&](Verdict& v) {
    std::size_t ok = 0, total = 0;
    for (const Graph& g : instances) {
      ok += pairing_report(independence_complex(g), 1e-8).paired();
      ++total;
    }
    // Nilpotent complexes beyond graphs: random lifts d = c^dag B.
    std::mt19937_64 rng(4);
    for (int k = 0; k < 30; ++k) {
      const PauliHamiltonian a = random_two_local(1 + k % 3, rng);
      ok += pairing_report(constrained_lift(a).complex, 1e-8).paired();
      ok += pairing_report(susy_lift(a), 1e-8).paired();
      total += 2;
    }
    v.detail << ok << "/" << total << " complexes; ";
    v.require(ok == total, "unmatched positive eigenvalue");
  });

  criterion(5, "witten index", [&](Verdict& v) {
    std::size_t ok = 0;
    for (const Graph& g : instances) {
      const WittenRecord w = witten_index(independence_complex(g));
      ok += w.from_dimensions == w.from_betti;
    }
    v.detail << ok << "/" << instances.size() << " instances, (4,2) -> " << witten_index(4, 2) << "; ";
    v.require(ok == instances.size(), "dimension and Betti sums differ");
    v.require(witten_index(4, 2) == 2, "synthetic count");
  });

  criterion(6, "squared spectrum", [&](Verdict& v) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(6);
    std::size_t ok = 0;
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      const PauliHamiltonian a = random_two_local(1 + k % 4, rng);
      const LiftedComplex lc = constrained_lift(a);
      const SquaredSpectrumCheck chk = verify_squared_spectrum(a, lc.complex, lc.level, 1e-8);
      std::vector<double> sq;
      for (double e : oracle::sorted_eigenvalues(kron_pauli(a))) sq.push_back(e * e);
      std::sort(sq.begin(), sq.end());
      const double dev = oracle::max_deviation(chk.laplacian_spectrum, sq);
      worst = std::max(worst, dev);
      ok += chk.pass && dev <= 1e-8;
    }
    const double t = seconds_since(t0);
    v.detail << ok << "/50 Hamiltonians, max deviation " << worst << ", " << t << " s; ";
    v.require(ok == 50, "spectrum mismatch");
    v.require(t < 60.0, "runtime above 60 s");
  });

  criterion(7, "topology oracles", [&](Verdict& v) {
    const auto c6 = betti_numbers(independence_complex(Graph::cycle(6)));
    v.require(c6[2] == 2, "C6 beta_2");
    v.require(c6 == oracle::reduced_betti_by_size(Graph::cycle(6)), "C6 oracle");
    const CochainComplex c4 = clique_complex(Graph::cycle(4));
    const auto b4 = betti_numbers(c4);
    v.require(b4[2] == 1, "clique C4 beta_2");
    v.require(witten_index(c4).from_dimensions == 1, "clique C4 chi");
    v.require(b4 == oracle::reduced_betti_by_size(complement(Graph::cycle(4))), "clique C4 oracle");
    const auto k3 = betti_numbers(clique_complex(Graph::complete(3)));
    v.require(std::all_of(k3.begin(), k3.end(), [](std::size_t b) { return b == 0; }), "clique K3 acyclic");
    v.require(k3 == oracle::reduced_betti_by_size(complement(Graph::complete(3))), "clique K3 oracle");
    v.detail << "C6 beta_2 = " << c6[2] << ", clique C4 beta_2 = " << b4[2] << "; ";
  });

  criterion(8, "estimator calibration", [&](Verdict& v) {
    const auto t0 = Clock::now();
    const CochainComplex c = independence_complex(Graph::cycle(6));
    const auto spec = oracle::sorted_eigenvalues(laplacian(c, 2));
    EstimatorConfig cfg;
    cfg.b = 1e-6;
    cfg.delta = 0.1;
    cfg.eps = 0.05;
    cfg.mu = 0.9;
    const double lo = density(spec, cfg.b) - cfg.eps, hi = density(spec, cfg.b + cfg.delta) + cfg.eps;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      cfg.seed = seed;
      const double chi = qbne(c, 2, cfg).chi;
      inside += chi >= lo && chi <= hi;
    }
    cfg.enumerate = true;
    const double exact = qbne(c, 2, cfg).chi;
    const double t = seconds_since(t0);
    v.detail << inside << "/100 runs in [" << lo << ", " << hi << "], enumeration " << exact << ", " << t << " s; ";
    v.require(inside >= 90, "too few runs inside the sandwich");
    v.require(exact == density(spec, cfg.b), "enumeration is not exact");
    v.require(t < 120.0, "runtime above 2 min");
  });

  criterion(9, "two-stage estimator", [&](Verdict& v) {
    const CochainComplex c = independence_complex(Graph::cycle(6));
    EstimatorConfig cfg;
    cfg.b = 1e-6;
    cfg.seed = 9;
    EstimatorConfig exact_cfg = cfg;
    exact_cfg.enumerate = true;
    const double reference = qbne(c, 2, exact_cfg).chi;
    const double direct = qbne(c, 2, cfg).chi;
    const EstimateReport two = dqc1_qbne(c, 2, cfg);
    v.detail << "two-stage " << two.chi << ", direct " << direct << ", exact " << reference << ", bound "
             << two.bound << "; ";
    v.require(std::abs(two.chi - reference) <= two.bound, "two-stage estimate outside its bound");
    v.require(std::abs(two.chi - direct) <= two.bound + cfg.eps, "two-stage and direct estimates disagree");
    bool raised = false;
    try {
      dqc1_qbne(c, 3, cfg);
    } catch (const PreconditionError&) {
      raised = true;
    }
    v.require(raised, "density floor not enforced on the sparse sector");
  });

  criterion(10, "jordan-wigner fidelity", [&](Verdict& v) {
    std::mt19937_64 rng(10);
    std::size_t ok = 0, total = 0;
    double worst = 0;
    std::uniform_int_distribution<int> coef(-3, 3);
    for (std::size_t m = 1; m <= 8; ++m)
      for (int k = 0; k < 4; ++k) {
        std::uniform_int_distribution<std::size_t> mode(0, m - 1), len(1, 4);
        std::bernoulli_distribution dagger(0.5);
        std::vector<FermionTerm> products;
        for (int t = 0; t < 4; ++t) {
          FermionTerm term{ExactComplex(Rational(coef(rng)), Rational(coef(rng))), {}};
          for (std::size_t f = len(rng); f > 0; --f) term.factors.push_back({mode(rng), dagger(rng)});
          products.push_back(term);
        }
        const FermionOperator x(m, products);
        const FermionOperator h = x + x.adjoint();
        const double dev = oracle::max_deviation(oracle::sorted_eigenvalues(jordan_wigner(h).matrix()),
                                                 oracle::sorted_eigenvalues(fermionic_matrix(h)));
        worst = std::max(worst, dev);
        ok += dev <= 1e-8;
        ++total;
      }
    for (const Graph& g : random_graphs(40, 2, 8, 11)) {
      const FermionOperator d = hardcore_supercharge(g);
      const double dev = oracle::max_deviation(oracle::sorted_eigenvalues(jw_dirac(g).expand().matrix()),
                                               oracle::sorted_eigenvalues(fermionic_matrix(d + d.adjoint())));
      worst = std::max(worst, dev);
      ok += dev <= 1e-8;
      ++total;
    }
    std::size_t counts_ok = 0;
    const auto count_graphs = random_graphs(100, 2, 12, 12);
    for (const Graph& g : count_graphs) {
      const bool groups = commuting_groups(jw_dirac(g), GroupingStrategy::per_term).size() <= g.vertices();
      const bool terms = jw_laplacian(g).terms.size() <= g.vertices() * (g.max_degree() + 1);
      counts_ok += groups && terms;
    }
    v.detail << ok << "/" << total << " spectra (max deviation " << worst << "), " << counts_ok << "/100 counts; ";
    v.require(ok == total, "spectrum mismatch");
    v.require(counts_ok == count_graphs.size(), "group or term count above bound");
  });

  criterion(11, "variational ground state", [&](Verdict& v) {
    const auto t0 = Clock::now();
    auto solve = [](const Graph& g, std::size_t l, double& exact) {
      const CochainComplex c = independence_complex(g);
      exact = spectrum(laplacian(c, l)).front();
      const FactoredOperator lap = jw_laplacian(g);
      VqeOptions opt;
      opt.restarts = 5;
      opt.seed = 11;
      return vqe_run(lap.expand(), commuting_groups(lap, GroupingStrategy::per_term), initial_sector_state(c.space(), l),
                     opt);
    };
    double p2_exact = 0, c6_exact = 0;
    const VqeResult p2 = solve(Graph::path(2), 1, p2_exact);
    const VqeResult c6 = solve(Graph::cycle(6), 3, c6_exact);
    const double t = seconds_since(t0);
    v.detail << "P2 best " << p2.energy << " (exact " << p2_exact << "), C6 best " << c6.energy << " (exact "
             << c6_exact << "), " << t << " s; ";
    v.require(std::abs(p2_exact) < 1e-12, "P2 sector minimum is not zero");
    v.require(p2.energy <= 1e-4, "P2 energy above 1e-4");
    v.require(std::abs(c6.energy - c6_exact) <= 1e-3, "C6 energy off by more than 1e-3");
    v.require(t < 300.0, "runtime above 5 min");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "susyhom/cochain.hpp"
#include "susyhom/errors.hpp"
#include "susyhom/estimate.hpp"
#include "susyhom/graph_complex.hpp"
#include "susyhom/qubit.hpp"
#include "susyhom/reduction.hpp"
#include "susyhom/vqe.hpp"

namespace susyhom::cli {

namespace {

using nlohmann::json;

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string scalar_text(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + scalar_text(x);
    return s.empty() ? "-" : s;
  }
  return v.dump();
}

// Key/value lines, or an aligned table for a "rows" array of objects.
void render_table(const json& j, std::ostream& out) {
  for (const auto& [key, value] : j.items()) {
    if (key == "rows" && value.is_array()) continue;
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) out << key << '.' << k2 << "  " << scalar_text(v2) << '\n';
    } else {
      out << key << "  " << scalar_text(value) << '\n';
    }
  }
  if (j.contains("rows") && j["rows"].is_array() && !j["rows"].empty()) {
    std::vector<std::string> cols;
    for (const auto& [k, v] : j["rows"][0].items()) cols.push_back(k);
    for (const auto& c : cols) out << std::setw(12) << c;
    out << '\n';
    for (const auto& row : j["rows"]) {
      for (const auto& c : cols) out << std::setw(12) << scalar_text(row[c]);
      out << '\n';
    }
  }
}

struct Globals {
  std::string format = "json";
  std::string convention = "fermion-number";
  unsigned workers = 1;
  std::size_t max_modes = 0;  // 0: default cap

  std::size_t cap() const { return max_modes ? max_modes : default_mode_cap(); }
  BettiConvention betti_convention() const {
    return convention == "simplicial" ? BettiConvention::simplicial : BettiConvention::fermion_number;
  }
};

void emit(const Globals& g, const json& j, std::ostream& out) {
  if (g.format == "table")
    render_table(j, out);
  else
    out << j.dump() << '\n';
}

CochainComplex graph_complex(const std::string& path, const std::string& kind, const Globals& g) {
  Graph graph = read_graph_file(path);
  return kind == "clique" ? clique_complex(graph, g.cap()) : independence_complex(graph, g.cap());
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw InputError("bad scale '" + cell + "' in --eps");
    }
  }
  if (out.empty()) throw InputError("--eps needs at least one scale");
  return out;
}

struct Checks {
  json results = json::object();
  bool ok = true;
  void record(const std::string& name, bool pass) {
    results[name] = pass;
    ok = ok && pass;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded fermionic complexes: homology, spectra, estimators and variational solvers"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--convention", g.convention, "Betti labelling: fermion-number or simplicial")
      ->check(CLI::IsMember({"fermion-number", "simplicial"}));
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1U, 256U));
  app.add_option("--max-modes", g.max_modes, "Enumeration cap on modes (default 24 or SUSYHOM_MAX_MODES)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));

  std::string graph_path, complex_kind = "independence", method = "exact";
  std::size_t level = 0;

  auto add_graph = [&](CLI::App* sub, bool with_kind = true) {
    sub->add_option("--graph", graph_path, "Graph file")->required();
    if (with_kind)
      sub->add_option("--complex", complex_kind, "independence or clique")
          ->check(CLI::IsMember({"independence", "clique"}));
  };

  auto* betti_cmd = app.add_subcommand("betti", "Betti number of one sector");
  add_graph(betti_cmd);
  betti_cmd->add_option("--level", level, "Sector (simplicial degree with --convention simplicial)")->required();
  betti_cmd->add_option("--method", method, "exact or spectral")->check(CLI::IsMember({"exact", "spectral"}));

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Laplacian spectrum of one sector");
  add_graph(spectrum_cmd);
  spectrum_cmd->add_option("--level", level, "Sector")->required();

  auto* witten_cmd = app.add_subcommand("witten", "Witten index, dimensions and Betti numbers");
  add_graph(witten_cmd);

  std::string points_path, eps_text;
  std::size_t max_level = 0;
  auto* tda_cmd = app.add_subcommand("tda", "Betti numbers of Vietoris-Rips clique complexes");
  tda_cmd->add_option("--points", points_path, "CSV point cloud")->required();
  tda_cmd->add_option("--eps", eps_text, "Comma separated non-decreasing scales")->required();
  tda_cmd->add_option("--max-level", max_level, "Largest degree reported")->required();

  EstimatorConfig est;
  bool dqc1 = false;
  auto* qbne_cmd = app.add_subcommand("qbne", "Low-lying eigenvalue density estimate");
  add_graph(qbne_cmd);
  qbne_cmd->add_option("--level", level, "Sector")->required();
  qbne_cmd->add_option("--b", est.b, "Threshold b");
  qbne_cmd->add_option("--delta", est.delta, "Gap promise delta");
  qbne_cmd->add_option("--eps", est.eps, "Additive accuracy");
  qbne_cmd->add_option("--mu", est.mu, "Success probability");
  qbne_cmd->add_option("--seed", est.seed, "RNG seed");
  qbne_cmd->add_option("--t-bits", est.t_bits, "Readout precision (0 exact, -1 auto)");
  qbne_cmd->add_flag("--enumerate", est.enumerate, "Count every eigenvalue instead of sampling");
  qbne_cmd->add_option("--density-floor", est.density_floor, "Two-stage sector density floor");
  qbne_cmd->add_flag("--dqc1", dqc1, "Two-stage estimator from maximally mixed input");

  std::string ham_path, variant = "constrained";
  bool verify = false;
  std::string penalty_text;
  auto* reduce_cmd = app.add_subcommand("reduce", "Lift a Pauli Hamiltonian to a supersymmetric complex");
  reduce_cmd->add_option("--hamiltonian", ham_path, "Pauli Hamiltonian file")->required();
  reduce_cmd->add_option("--variant", variant, "penalty or constrained")
      ->check(CLI::IsMember({"penalty", "constrained"}));
  reduce_cmd->add_flag("--verify-squares", verify, "Check that the lifted spectrum squares the input");
  reduce_cmd->add_option("--J", penalty_text, "Penalty strength (default 1 + ceil(sum |coef|))");

  std::size_t sector = 0;
  VqeOptions vqe_opts;
  std::string optimizer = "coordinate";
  auto* vqe_cmd = app.add_subcommand("vqe", "Variational minimum of the hard-core Hamiltonian in one sector");
  add_graph(vqe_cmd, false);
  vqe_cmd->add_option("--sector", sector, "Fermion-number sector")->required();
  vqe_cmd->add_option("--layers", vqe_opts.layers, "Ansatz layers")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  vqe_cmd->add_option("--seed", vqe_opts.seed, "RNG seed");
  vqe_cmd->add_option("--restarts", vqe_opts.restarts, "Random restarts")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  vqe_cmd->add_option("--optimizer", optimizer, "coordinate or simplex")->check(CLI::IsMember({"coordinate", "simplex"}));

  auto* check_cmd = app.add_subcommand("check", "Run the invariant suite on a graph");
  add_graph(check_cmd);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*betti_cmd) {
      CochainComplex c = graph_complex(graph_path, complex_kind, g);
      const BettiMethod m = method == "spectral" ? BettiMethod::spectral : BettiMethod::exact_rank;
      std::size_t value = 0;
      if (g.betti_convention() == BettiConvention::simplicial) {
        if (level + 1 <= c.modes()) value = betti(c, level + 1, m);
        if (level == 0 && c.modes() > 0) value += 1;
      } else {
        if (level > c.modes()) throw InputError("level exceeds the number of modes");
        value = betti(c, level, m);
      }
      emit(g, {{"complex", complex_kind}, {"level", level}, {"betti", value}, {"method", method},
               {"convention", g.convention}},
           out);
    } else if (*spectrum_cmd) {
      CochainComplex c = graph_complex(graph_path, complex_kind, g);
      if (level > c.modes()) throw InputError("level exceeds the number of modes");
      std::vector<double> values = c.dimension(level) ? spectrum(laplacian(c, level)) : std::vector<double>{};
      emit(g, {{"level", level}, {"dimension", values.size()}, {"eigenvalues", numbers(values)},
               {"gap", number(spectral_gap(values))}},
           out);
    } else if (*witten_cmd) {
      CochainComplex c = graph_complex(graph_path, complex_kind, g);
      WittenRecord w = witten_index(c, g.workers);
      emit(g, {{"witten", w.from_dimensions}, {"from_dimensions", w.from_dimensions}, {"from_betti", w.from_betti},
               {"dims", c.dimensions()}, {"betti", betti_numbers(c, BettiMethod::exact_rank, kZeroTol, g.workers)}},
           out);
    } else if (*tda_cmd) {
      PointCloud pts = read_point_cloud_file(points_path);
      auto rows = betti_scan(pts, parse_eps_list(eps_text), max_level, g.betti_convention(), g.workers, g.cap());
      json r = json::array();
      for (const auto& row : rows) {
        json o{{"eps", number(row.eps)}, {"degree", row.degree}};
        o["betti"] = row.betti ? json(*row.betti) : json(nullptr);
        o["error"] = row.error.empty() ? json(nullptr) : json(row.error);
        r.push_back(o);
      }
      emit(g, {{"convention", g.convention}, {"points", pts.size()}, {"rows", r}}, out);
    } else if (*qbne_cmd) {
      CochainComplex c = graph_complex(graph_path, complex_kind, g);
      est.workers = g.workers;
      EstimateReport r = dqc1 ? dqc1_qbne(c, level, est) : qbne(c, level, est);
      emit(g, json::parse(to_json(r)), out);
    } else if (*reduce_cmd) {
      PauliHamiltonian a = read_pauli_file(ham_path);
      json r{{"variant", variant}, {"qubits", a.qubits()}, {"locality", a.locality()}};
      if (variant == "penalty") {
        const Rational j = penalty_text.empty() ? default_penalty_strength(a) : parse_rational(penalty_text);
        CochainComplex c = susy_lift(a, j, g.cap());
        r["modes"] = c.modes();
        r["J"] = format_rational(j);
        r["terms"] = c.differential().terms().size();
        if (verify) {
          // H = B^2 on the whole space: compare the Laplacian spectra with
          // the squared spectrum of the bosonic part.
          FermionOperator body = lifted_bosonic_part(a, j);
          GradedSpace full(body.modes(), {}, g.cap());
          std::vector<double> expected, got;
          for (std::size_t l = 0; l <= c.modes(); ++l) {
            if (!c.dimension(l)) continue;
            for (double v : spectrum(laplacian(c, l))) got.push_back(v);
            for (double v : spectrum(sector_matrix(body, full, l).to_dense(body.scale()))) expected.push_back(v * v);
          }
          std::sort(expected.begin(), expected.end());
          std::sort(got.begin(), got.end());
          double dev = 0, scale = 1;
          for (std::size_t k = 0; k < got.size(); ++k) {
            dev = std::max(dev, std::abs(got[k] - expected[k]));
            scale = std::max(scale, expected[k]);
          }
          const bool pass = got.size() == expected.size() && dev <= 1e-8 * scale;
          r["verify"] = {{"pass", pass}, {"max_deviation", number(dev)}};
          emit(g, r, out);
          return pass ? kOk : kPreconditionFailure;
        }
      } else {
        LiftedComplex lc = constrained_lift(a, g.cap());
        r["modes"] = lc.complex.modes();
        r["level"] = lc.level;
        r["dimension"] = lc.complex.dimension(lc.level);
        r["terms"] = lc.complex.differential().terms().size();
        if (verify) {
          SquaredSpectrumCheck chk = verify_squared_spectrum(a, lc.complex, lc.level);
          r["verify"] = {{"pass", chk.pass}, {"max_deviation", number(chk.max_deviation)},
                         {"spectrum", numbers(chk.laplacian_spectrum)}};
          emit(g, r, out);
          return chk.pass ? kOk : kPreconditionFailure;
        }
      }
      emit(g, r, out);
    } else if (*vqe_cmd) {
      Graph graph = read_graph_file(graph_path);
      CochainComplex c = independence_complex(graph, g.cap());
      if (sector > c.modes()) throw InputError("sector exceeds the number of modes");
      FactoredOperator lap = jw_laplacian(graph);
      auto groups = commuting_groups(lap, GroupingStrategy::per_term);
      vqe_opts.optimizer = optimizer == "simplex" ? Optimizer::nelder_mead : Optimizer::coordinate_descent;
      vqe_opts.workers = g.workers;
      const std::uint64_t init = initial_sector_state(c.space(), sector);
      VqeResult res = vqe_run(lap.expand(), groups, init, vqe_opts);
      const double exact = spectrum(laplacian(c, sector)).front();
      AnsatzSpec spec{groups, vqe_opts.layers, res.params, vqe_opts.seed};
      emit(g, {{"sector", sector}, {"energy", number(res.energy)}, {"exact_minimum", number(exact)},
               {"best_restart", res.best_restart}, {"restart_energies", numbers(res.restart_energies)},
               {"evaluations", res.evaluations}, {"stagnated", res.stagnated}, {"initial_state", init},
               {"ansatz", json::parse(to_json(spec))}},
           out);
    } else if (*check_cmd) {
      Graph graph = read_graph_file(graph_path);
      Graph used = complex_kind == "clique" ? complement(graph) : graph;
      CochainComplex c = independence_complex(used, g.cap());
      Checks chk;
      chk.record("nilpotent", nilpotency_residual(c.differential(), c.space()) == 0.0);
      const auto exact = betti_numbers(c, BettiMethod::exact_rank, kZeroTol, g.workers);
      const auto spectral = betti_numbers(c, BettiMethod::spectral, kZeroTol, g.workers);
      chk.record("hodge", exact == spectral);
      bool ham = true;
      FermionOperator h = hardcore_hamiltonian(used);
      for (std::size_t l = 0; l <= c.modes(); ++l)
        ham = ham && sector_matrix(h, c.space(), l) == laplacian_exact(c, l);
      chk.record("hamiltonian", ham);
      chk.record("pairing", pairing_report(c, kZeroTol, g.workers).paired());
      bool witten_ok = true;
      try {
        witten_index(c, g.workers);
      } catch (const NumericalError&) {
        witten_ok = false;
      }
      chk.record("witten", witten_ok);
      if (used.vertices() <= 8) {
        std::vector<double> fermionic = spectrum(dirac(CochainComplex(GradedSpace(used.vertices()),
                                                                      hardcore_supercharge(used))));
        std::vector<double> qubit = spectrum(jw_dirac(used).expand().matrix());
        bool same = fermionic.size() == qubit.size();
        for (std::size_t k = 0; same && k < qubit.size(); ++k) same = std::abs(fermionic[k] - qubit[k]) <= 1e-8;
        chk.record("jordan_wigner", same);
      }
      chk.record("group_bound",
                 commuting_groups(jw_dirac(used), GroupingStrategy::per_term).size() <= used.vertices() &&
                     jw_laplacian(used).terms.size() <= used.vertices() * (used.max_degree() + 1));
      emit(g, {{"checks", chk.results}, {"ok", chk.ok}}, out);
      return chk.ok ? kOk : kPreconditionFailure;
    }
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kPreconditionFailure;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kPreconditionFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kPreconditionFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace susyhom::cli

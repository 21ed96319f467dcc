#pragma once

// Config-driven commands behind the `tto` executable. Every command returns
// its output text and exit code instead of touching the filesystem, so the
// same code runs under test.
//
// Exit codes: 0 pass, 1 suite failure, 2 config error, 3 numerical error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tto/clark.hpp"
#include "tto/errors.hpp"
#include "tto/hardy.hpp"
#include "tto/inner.hpp"
#include "tto/modelspace.hpp"
#include "tto/operators.hpp"
#include "tto/serialize.hpp"
#include "tto/verify.hpp"

namespace tto::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kPass = 0, kSuiteFailure = 1, kConfigError = 2, kNumericalError = 3 };

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"adjoint_graph", "clark", "commutant", "inverse", "product_uniqueness", "selfadjoint"};
  return s;
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k{"u",     "grid",  "alpha", "symbols", "psi", "phi_atoms",
                                          "suites", "seed", "tol",   "samples", "out", "plot"};
  return k;
}

inline json default_config() {
  return {{"u", {{"zeros", json::array({json::array({0.0, 0.0, 3})})}, {"constant", json::array({1.0, 0.0})}}},
          {"grid", kDefaultGridSize},
          {"alpha", json::array({0.0, 0.4, 1.0})},
          {"symbols", json::array()},
          {"suites", known_suites()},
          {"seed", 0},
          {"tol", kDefaultTol},
          {"samples", 20}};
}

struct ExperimentConfig {
  BlaschkeProduct u;
  int grid = kDefaultGridSize;
  std::vector<SedlockParameter> alphas;
  std::vector<RationalSymbol> symbols;
  std::optional<RationalSymbol> psi;
  std::optional<Eigen::VectorXcd> phi_atoms;  // empty: identity on atoms
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  int samples = 20;
  std::string out;
  std::string plot;
  json echo;  // merged parameters, without output paths
};

inline SedlockParameter alpha_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return SedlockParameter::infinity();
    throw invariant_error("alpha: expected a number, [re, im] or \"inf\", got " + j.dump());
  }
  return SedlockParameter::finite(complex_from_json(j));
}

// Merges `over` into `base` key by key; an explicit null removes the key.
inline void merge_into(json& base, const json& over) {
  if (!over.is_object()) throw invariant_error("config: top level must be an object");
  for (const auto& [key, value] : over.items()) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw invariant_error("config: unknown key \"" + key + "\"");
    if (value.is_null()) base.erase(key); else base[key] = value;
  }
}

inline ExperimentConfig parse_config(const json& merged) {
  ExperimentConfig c;
  try {
    for (const auto& [key, _] : merged.items())
      if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
        throw invariant_error("config: unknown key \"" + key + "\"");

    c.u = blaschke_from_json(merged.at("u"));
    if (c.u.degree() < 1) throw invariant_error("u: needs at least one zero");
    c.grid = merged.at("grid").get<int>();
    BoundaryGrid(c.grid).require_resolves(c.u.degree());

    const json& a = merged.at("alpha");
    // An array is always a list of parameters; a single complex value is [[re, im]].
    if (a.is_array()) {
      for (const auto& x : a) c.alphas.push_back(alpha_from_json(x));
    } else {
      c.alphas.push_back(alpha_from_json(a));
    }
    if (c.alphas.empty()) throw invariant_error("alpha: list is empty");

    for (const auto& s : merged.value("symbols", json::array())) c.symbols.push_back(symbol_from_json(s));
    if (merged.contains("psi")) c.psi = symbol_from_json(merged.at("psi"));
    if (merged.contains("phi_atoms")) {
      const json& p = merged.at("phi_atoms");
      if (!(p.is_string() && p.get<std::string>() == "identity")) {
        if (!p.is_array() || static_cast<int>(p.size()) != c.u.degree())
          throw invariant_error("phi_atoms: expected \"identity\" or one value per atom (" +
                                std::to_string(c.u.degree()) + ")");
        Eigen::VectorXcd v(c.u.degree());
        for (int k = 0; k < c.u.degree(); ++k) v(k) = complex_from_json(p[static_cast<std::size_t>(k)]);
        c.phi_atoms = v;
      }
    }
    c.suites = merged.at("suites").get<std::vector<std::string>>();
    for (const auto& s : c.suites)
      if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
        throw invariant_error("suites: unknown suite \"" + s + "\"");
    c.seed = merged.at("seed").get<std::uint64_t>();
    c.tol = merged.at("tol").get<double>();
    if (!(c.tol > 0.0)) throw invariant_error("tol: must be positive");
    c.samples = merged.at("samples").get<int>();
    if (c.samples < 1) throw invariant_error("samples: must be >= 1");
    c.out = merged.value("out", std::string{});
    c.plot = merged.value("plot", std::string{});
  } catch (const json::exception& e) {
    throw invariant_error(std::string("config: ") + e.what());
  }
  c.echo = merged;
  c.echo.erase("out");
  c.echo.erase("plot");
  return c;
}

// ---- flag helpers -------------------------------------------------------------

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos)
    throw invariant_error(std::string(what) + ": cannot parse \"" + s + "\" as a number");
  return v;
}

// "re,im,mult;re,im,mult;..."
inline json parse_zeros_flag(const std::string& s) {
  json zeros = json::array();
  for (const auto& item : split(s, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() < 2 || parts.size() > 3) throw invariant_error("--u-zeros: entries are re,im[,mult]");
    const int mult = parts.size() == 3 ? static_cast<int>(parse_number(parts[2], "--u-zeros")) : 1;
    zeros.push_back(json::array({parse_number(parts[0], "--u-zeros"), parse_number(parts[1], "--u-zeros"), mult}));
  }
  return zeros;
}

// "re,im;re;inf"
inline json parse_alpha_flag(const std::string& s) {
  json list = json::array();
  for (const auto& item : split(s, ';')) {
    if (item == "inf") { list.push_back("inf"); continue; }
    const auto parts = split(item, ',');
    if (parts.empty() || parts.size() > 2) throw invariant_error("--alpha: entries are re[,im] or inf");
    list.push_back(json::array({parse_number(parts[0], "--alpha"), parts.size() == 2 ? parse_number(parts[1], "--alpha") : 0.0}));
  }
  return list;
}

inline json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invariant_error("config: cannot open " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw invariant_error("config: " + path + ": " + e.what());
  }
}

// ---- output -------------------------------------------------------------------

struct CommandResult {
  int exit_code = kPass;
  std::string text;  // main output
  std::string plot;  // optional plot data
};

inline json header(const std::string& command, const ExperimentConfig& c) {
  return {{"tool", "tto"}, {"version", kVersion}, {"command", command}, {"seed", c.seed}, {"params", c.echo}};
}

inline std::string csv_header(const std::string& command, const ExperimentConfig& c) {
  std::string h = "# tto " + std::string(kVersion) + " " + command + "\n";
  h += "# seed: " + std::to_string(c.seed) + "\n";
  h += "# params: " + c.echo.dump() + "\n";
  return h;
}

inline std::string fmt(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// ---- commands -----------------------------------------------------------------

inline CommandResult cmd_build(const ExperimentConfig& c) {
  const ModelSpaceBasis B(c.u, BoundaryGrid(c.grid));
  json out{{"header", header("build", c)}, {"u", to_json(c.u)}, {"basis", to_json(B.tag())}};
  out["compressed_shift"] = to_json(compressed_shift(B));
  json shifts = json::array();
  json clark = json::array();
  for (const auto& a : c.alphas) {
    shifts.push_back({{"alpha", to_json(a)}, {"operator", to_json(class_shift(B, a))}});
    if (a.regime() == SedlockParameter::Regime::boundary) clark.push_back(to_json(clark_measure(B, a.value())));
  }
  out["class_shifts"] = std::move(shifts);
  json ttos = json::array();
  for (const auto& s : c.symbols) ttos.push_back({{"symbol", to_json(s)}, {"operator", to_json(tto_matrix(B, s))}});
  out["tto"] = std::move(ttos);
  out["clark"] = std::move(clark);
  return {kPass, out.dump(2) + "\n", {}};
}

namespace detail {

inline Rng symbol_rng(const ExperimentConfig& c, const std::string& suite, const SedlockParameter& a) {
  return Rng(derive_seed(c.seed, "cli|" + suite + "|" + a.to_string()));
}

// Config symbols, or one seeded random symbol admissible for u_beta.
inline std::vector<RationalSymbol> symbols_for(const ExperimentConfig& c, const std::string& suite,
                                               const SedlockParameter& a, const BlaschkeProduct& ub) {
  if (!c.symbols.empty()) return c.symbols;
  auto rng = symbol_rng(c, suite, a);
  return {random_local_symbol(rng, ub)};
}

inline AtomFunction atoms_for(const ExperimentConfig& c, const ModelSpaceBasis& B, bool real_only,
                              const std::string& suite, const SedlockParameter& a) {
  if (c.phi_atoms && (!real_only || AtomFunction{*c.phi_atoms}.is_real())) return {*c.phi_atoms};
  auto rng = symbol_rng(c, suite, a);
  const auto m = static_cast<std::size_t>(B.dimension());
  return real_only ? random_real_atom_function(rng, m) : random_atom_function(rng, m);
}

inline bool selected(const ExperimentConfig& c, const std::string& s) {
  return std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end();
}

}  // namespace detail

inline std::vector<VerificationReport> run_suites(const ExperimentConfig& c) {
  using R = SedlockParameter::Regime;
  const ModelSpaceBasis B(c.u, BoundaryGrid(c.grid));
  const SuiteOptions opt{c.seed, c.tol, c.samples};
  std::vector<VerificationReport> reps;
  auto take = [&](std::vector<VerificationReport> r) {
    for (auto& x : r) reps.push_back(std::move(x));
  };

  for (const auto& a : c.alphas) {
    const R regime = a.regime();
    if (detail::selected(c, "commutant")) take(suite_commutant(B, a, opt));
    if (regime == R::boundary) {
      const cplx al = a.value();
      if (detail::selected(c, "clark")) take(suite_clark(B, al, opt));
      if (detail::selected(c, "inverse")) take(suite_inverse(B, al, detail::atoms_for(c, B, false, "inverse", a), opt));
      if (detail::selected(c, "selfadjoint"))
        take(suite_selfadjoint(B, al, detail::atoms_for(c, B, true, "selfadjoint", a), opt));
      continue;
    }
    const cplx beta = regime == R::inside ? a.value() : a.reflected().value();
    const auto ub = frostman_shift(c.u, beta);
    if (regime == R::inside) {
      if (detail::selected(c, "adjoint_graph"))
        for (const auto& s : detail::symbols_for(c, "adjoint_graph", a, ub)) take(suite_adjoint_graph(B, s, beta, opt));
      if (detail::selected(c, "product_uniqueness")) {
        auto rng = detail::symbol_rng(c, "product_uniqueness|psi", a);
        const RationalSymbol psi = c.psi ? *c.psi : random_bounded_symbol(rng);
        for (const auto& s : detail::symbols_for(c, "product_uniqueness", a, ub))
          take(suite_product_uniqueness(B, beta, psi, s, opt));
      }
    }
    if (detail::selected(c, "inverse"))
      for (const auto& s : detail::symbols_for(c, "inverse", a, ub)) take(suite_inverse(B, a, s, opt));
  }
  sort_reports(reps);
  return reps;
}

inline CommandResult cmd_verify(const ExperimentConfig& c) {
  const auto reps = run_suites(c);
  json arr = json::array();
  std::size_t met = 0;
  for (const auto& r : reps) {
    arr.push_back(to_json(r));
    if (r.as_expected()) ++met;
  }
  const bool ok = met == reps.size();
  json out{{"header", header("verify", c)},
           {"summary", {{"reports", reps.size()}, {"as_expected", met}, {"status", ok ? "pass" : "fail"}}},
           {"reports", std::move(arr)}};
  return {ok ? kPass : kSuiteFailure, out.dump(2) + "\n", {}};
}

inline CommandResult cmd_spectrum(const ExperimentConfig& c) {
  const auto it = std::find_if(c.alphas.begin(), c.alphas.end(),
                               [](const SedlockParameter& a) { return a.regime() == SedlockParameter::Regime::boundary; });
  if (it == c.alphas.end()) throw invariant_error("spectrum: needs a unimodular alpha in the config");
  const cplx alpha = it->value();
  const ModelSpaceBasis B(c.u, BoundaryGrid(c.grid));
  const auto mu = clark_measure(B, alpha);
  const AtomFunction phi = c.phi_atoms ? AtomFunction{*c.phi_atoms} : AtomFunction::identity(mu);
  const Eigen::MatrixXcd a = functional_calculus_unitary(B, alpha, phi).matrix();

  // Dense eigenvalues, each matched to the nearest unused Phi value.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<cplx> matched(mu.size());
  std::vector<bool> used(dense.size(), false);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dense.size(); ++k) {
      const double d = std::abs(dense[k] - phi.values(static_cast<Eigen::Index>(j)));
      if (!used[k] && d < bd) { bd = d; best = k; }
    }
    used[best] = true;
    matched[j] = dense[best];
  }

  std::string csv = csv_header("spectrum", c);
  csv += "# alpha: " + fmt(alpha.real()) + "," + fmt(alpha.imag()) + "\n";
  csv += "atom_re,atom_im,weight,phi_re,phi_im,eigenvalue_re,eigenvalue_im\n";
  std::string plot = csv_header("spectrum-plot", c) + "angle,weight\n";
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const cplx z = mu.atoms[j];
    const cplx p = phi.values(static_cast<Eigen::Index>(j));
    csv += fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(mu.weights[j]) + "," + fmt(p.real()) + "," + fmt(p.imag()) +
           "," + fmt(matched[j].real()) + "," + fmt(matched[j].imag()) + "\n";
    double t = std::arg(z);
    if (t < 0) t += 2.0 * std::numbers::pi;
    plot += fmt(t) + "," + fmt(mu.weights[j]) + "\n";
  }
  return {kPass, csv, plot};
}

// Inverse operators with the recovered symbol representative and the
// inverse-suite reports.
inline CommandResult cmd_invert(const ExperimentConfig& c) {
  using R = SedlockParameter::Regime;
  const ModelSpaceBasis B(c.u, BoundaryGrid(c.grid));
  const SuiteOptions opt{c.seed, c.tol, c.samples};
  json results = json::array();
  bool ok = true;
  for (const auto& a : c.alphas) {
    std::vector<VerificationReport> reps;
    json entry{{"alpha", to_json(a)}};
    Eigen::MatrixXcd op;
    if (a.regime() == R::boundary) {
      const auto phi = detail::atoms_for(c, B, false, "inverse", a);
      entry["phi_atoms"] = to_json(phi.values);
      op = functional_calculus_unitary(B, a.value(), phi).matrix();
      reps = suite_inverse(B, a.value(), phi, opt);
    } else {
      const cplx beta = a.regime() == R::inside ? a.value() : a.reflected().value();
      const auto syms = detail::symbols_for(c, "inverse", a, frostman_shift(c.u, beta));
      const auto& phi = syms.front();
      entry["phi"] = to_json(phi);
      op = a.regime() == R::inside ? quotient_operator(B, phi, beta).matrix() : adjoint_class_operator(B, phi, a).matrix();
      reps = suite_inverse(B, a, phi, opt);
    }
    const auto& main = reps.front();
    entry["outcome"] = main.outcome;
    if (main.outcome == "invertible") {
      entry["inverse"] = to_json(OperatorMatrix(op.inverse(), B.tag()));
      if (main.diagnostics.contains("representative")) {
        entry["representative"] = main.diagnostics["representative"];
        entry["representative_basis"] = main.diagnostics["representative_basis"];
      }
    }
    json rj = json::array();
    for (const auto& r : reps) {
      rj.push_back(to_json(r));
      ok = ok && r.as_expected();
    }
    entry["reports"] = std::move(rj);
    results.push_back(std::move(entry));
  }
  json out{{"header", header("invert", c)}, {"results", std::move(results)}};
  return {ok ? kPass : kSuiteFailure, out.dump(2) + "\n", {}};
}

inline CommandResult run_command(const std::string& command, const ExperimentConfig& c) {
  if (command == "build") return cmd_build(c);
  if (command == "verify") return cmd_verify(c);
  if (command == "spectrum") return cmd_spectrum(c);
  if (command == "invert") return cmd_invert(c);
  throw invariant_error("unknown command \"" + command + "\"");
}

// Maps library errors to exit codes; the message goes to `err`.
template <class F>
int guarded(F&& body, std::string& err) {
  try {
    return body();
  } catch (const invariant_error& e) {
    err = std::string("config error: ") + e.what();
    return kConfigError;
  } catch (const numerical_error& e) {
    err = std::string("numerical error: ") + e.what();
    return kNumericalError;
  } catch (const std::exception& e) {
    err = std::string("error: ") + e.what();
    return kNumericalError;
  }
}

}  // namespace tto::cli

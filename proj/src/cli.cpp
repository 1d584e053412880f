#include "parastat/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "parastat/bilinears.hpp"
#include "parastat/errors.hpp"
#include "parastat/fockspace.hpp"
#include "parastat/freegas.hpp"
#include "parastat/io.hpp"
#include "parastat/kernels.hpp"
#include "parastat/selftest.hpp"
#include "parastat/spinchain.hpp"

namespace parastat::cli {
namespace {

using io::Json;

struct Config {
  std::string builtin_name;
  std::optional<int> m;
  std::string file;
  bool negate = false;
  bool no_validate = false;
  std::string out_path;
  std::string format;
  std::optional<double> tol;
  std::uint64_t seed = 20240611;
  int threads = 0;

  int nmax = -1;
  int order = 6;
  std::string grid = "-4:4:0.25";
  int sites = 0;
  std::vector<double> j, mu;
  std::optional<double> beta;
  std::optional<double> time;
  std::string spec_path;
  std::vector<std::string> suites;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RMatrix load_r(const Config& c, bool validate) {
  if (!c.file.empty() && !c.builtin_name.empty())
    throw ShapeError("--builtin and --file are mutually exclusive");
  if (c.file.empty() && c.builtin_name.empty()) throw ShapeError("one of --builtin or --file is required");
  RMatrix r = [&] {
    if (!c.file.empty()) return io::load_rmatrix(c.file, validate && !c.no_validate, 1e-12);
    const Builtin b = parse_builtin(c.builtin_name);
    const bool scalar = b == Builtin::fermion || b == Builtin::boson;
    return builtin(b, c.m.value_or(scalar ? 1 : 2));
  }();
  return c.negate ? negate(r) : r;
}

Json header(const std::string& command, const Config& c, const std::optional<RMatrix>& r,
            const Json& tolerances) {
  Json h;
  h["tool"] = "parastat";
  h["version"] = kVersion;
  h["command"] = command;
  if (r) {
    h["rmatrix"] = r->label();
    h["m"] = r->m();
    h["fingerprint"] = io::hex64(r->fingerprint());
  }
  h["tolerances"] = tolerances;
  h["seed"] = c.seed;
  return h;
}

// Leading '#' lines carry the same metadata as the JSON header.
std::string csv_header(const Json& h) {
  std::string s;
  for (const auto& [k, v] : h.items()) s += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return s;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> g;
  if (spec.find(':') != std::string::npos) {
    double a, b, step;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || b < a)
      throw ShapeError("grid must be START:STOP:STEP with STEP > 0 and STOP >= START");
    const long n = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
    if (n > 1'000'000) throw ResourceError("grid has more than 10^6 points");
    for (long k = 0; k < n; ++k) g.push_back(a + static_cast<double>(k) * step);
  } else {
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        std::size_t used = 0;
        g.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ShapeError("bad grid value '" + tok + "'");
      }
    }
  }
  if (g.empty()) throw ShapeError("empty grid");
  return g;
}

// A single J or mu value is broadcast over the chain.
std::vector<double> broadcast(std::vector<double> v, std::size_t n, double fill) {
  if (v.empty()) return std::vector<double>(n, fill);
  if (v.size() == 1) return std::vector<double>(n, v[0]);
  return v;
}

SpinChainSpec chain_spec(const Config& c) {
  if (!c.spec_path.empty()) return io::load_chain_spec(c.spec_path, !c.no_validate);
  if (c.sites < 1) throw ShapeError("--N must be a positive number of sites");
  const std::size_t n = static_cast<std::size_t>(c.sites);
  std::vector<double> j = c.j.size() == n ? c.j : broadcast(c.j, n - 1, 1.0);
  return SpinChainSpec::make(load_r(c, true), c.sites, std::move(j), broadcast(c.mu, n, 0.0));
}

class Emitter {
 public:
  Emitter(const Config& c, std::ostream& out) : c_(c), out_(out) {}
  void write(const std::string& text) {
    if (c_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(c_.out_path);
    if (!f) throw ShapeError("cannot write " + c_.out_path);
    f << text;
  }
  void json(const Json& j) { write(j.dump(2) + "\n"); }

 private:
  const Config& c_;
  std::ostream& out_;
};

bool want_csv(const Config& c, bool default_csv) {
  return c.format.empty() ? default_csv : c.format == "csv";
}

int cmd_ybe(const Config& c, std::ostream& out) {
  const double tol = c.tol.value_or(1e-12);
  const RMatrix r = load_r(c, false);
  const YbeReport rep = ybe_check(r, tol);
  Json h = header("ybe", c, r, {{"ybe", tol}});
  const bool ok = rep.involutive && rep.braid;
  if (want_csv(c, false)) {
    std::string s = csv_header(h) + "check,residual,pass\n";
    s += "involution," + fmt17(rep.involution_residual) + "," + (rep.involutive ? "true" : "false") + "\n";
    s += "braid," + fmt17(rep.braid_residual) + "," + (rep.braid ? "true" : "false") + "\n";
    Emitter(c, out).write(s);
  } else {
    h["involutive"] = rep.involutive;
    h["braid"] = rep.braid;
    h["involution_residual"] = rep.involution_residual;
    h["braid_residual"] = rep.braid_residual;
    h["passed"] = ok;
    Emitter(c, out).json(h);
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_exclusion(const Config& c, std::ostream& out) {
  const RMatrix r = load_r(c, true);
  int nmax = c.nmax;
  if (nmax < 0) nmax = natural_nmax(r).value_or(5);
  const std::vector<int> d = exclusion_statistics(r, nmax);
  bool ok = true;
  Json closed = nullptr;
  if (r.hilbert_closed_form()) {
    const IntPoly want = r.hilbert_closed_form()->coefficients(nmax + 1);
    ok = IntPoly(d.begin(), d.end()) == want;
    closed = r.hilbert_closed_form()->to_string();
  }
  Json h = header("exclusion", c, r, {{"rank_cutoff", kRankCutoff}});
  if (want_csv(c, true)) {
    std::string names, values;
    for (int n = 0; n <= nmax; ++n) {
      names += (n ? ",d_" : "d_") + std::to_string(n);
      values += (n ? "," : "") + std::to_string(d[n]);
    }
    Emitter(c, out).write(csv_header(h) + names + "\n" + values + "\n");
  } else {
    h["nmax"] = nmax;
    h["d"] = d;
    h["closed_form"] = closed;
    h["matches_closed_form"] = ok;
    Emitter(c, out).json(h);
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_series(const Config& c, std::ostream& out) {
  const RMatrix r = load_r(c, true);
  const int order = c.order;
  if (order < 1) throw ShapeError("--K must be at least 1");
  const HilbertSeries hs = hilbert_series(r, order);
  const ReciprocityReport rec = series_reciprocity_check(r, order);
  Json h = header("series", c, r, {{"reciprocity", 0}});
  const bool ok = rec.max_coeff_error == 0;
  if (want_csv(c, false)) {
    std::string s = csv_header(h) + "n,d_n,reciprocity_product\n";
    for (int n = 0; n <= order; ++n)
      s += std::to_string(n) + "," + std::to_string(hs.coefficients[n]) + "," +
           std::to_string(rec.product[n]) + "\n";
    Emitter(c, out).write(s);
  } else {
    h["K"] = order;
    h["coefficients"] = hs.coefficients;
    h["closed_form"] = hs.closed_form ? Json(hs.closed_form->to_string()) : Json(nullptr);
    if (hs.closed_form) h["radius"] = std::isinf(hs.closed_form->radius()) ? Json(nullptr) : Json(hs.closed_form->radius());
    h["reciprocity_product"] = rec.product;
    h["reciprocity_max_error"] = rec.max_coeff_error;
    h["passed"] = ok;
    Emitter(c, out).json(h);
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_thermo(const Config& c, std::ostream& out) {
  const RMatrix r = load_r(c, true);
  const auto rows = occupation_curve(r, parse_grid(c.grid));
  Json h = header("thermo", c, r, Json::object());
  h["grid"] = c.grid;
  if (want_csv(c, true)) {
    Emitter(c, out).write(csv_header(h) + occupation_csv(rows));
    return kPass;
  }
  Json table = Json::array();
  for (const auto& row : rows)
    table.push_back({{"beta_eps", row.beta_eps},
                     {"occupation_R", row.occupation},
                     {"occupation_fermion", row.fermion},
                     {"occupation_boson", row.boson ? Json(*row.boson) : Json(nullptr)}});
  h["rows"] = std::move(table);
  Emitter(c, out).json(h);
  return kPass;
}

int cmd_freegas(const Config& c, std::ostream& out) {
  const SpinChainSpec spec = chain_spec(c);
  const double beta = c.beta.value_or(1.0);
  const ModeSolution sol = diagonalize(spec.hopping_matrix());
  const StaticCorrelators corr = static_correlators(spec.r, sol, beta);
  const Json meta = header("freegas", c, spec.r, {{"degenerate_modes", 1e-9}});
  Json h = meta;
  h["N"] = spec.sites;
  h["beta"] = beta;
  h["J"] = spec.j;
  h["mu"] = spec.mu;
  h["epsilons"] = io::real_vector(sol.epsilons);
  h["Z"] = partition_function(spec.r, sol, beta);
  h["F"] = free_energy(spec.r, sol, beta);
  h["mode_occupation"] = io::real_vector(corr.occupation);
  h["e_position"] = io::complex_matrix(corr.e_position);
  h["e_mode"] = io::complex_matrix(corr.e_mode);
  h["e_mode_pair"] = io::complex_matrix(corr.e_mode_pair);
  if (c.time) {
    const int n = spec.sites;
    CMatrix comm(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) comm(a, b) = unequal_time_commutator(spec.r, sol, beta, a, b, *c.time);
    h["t"] = *c.time;
    h["number_commutator"] = io::complex_matrix(comm);
  }
  if (want_csv(c, false)) {
    std::string s = csv_header(meta);
    s += "k,epsilon,occupation\n";
    for (int k = 0; k < spec.sites; ++k)
      s += std::to_string(k) + "," + fmt17(sol.epsilons(k)) + "," + fmt17(corr.occupation(k)) + "\n";
    Emitter(c, out).write(s);
  } else {
    Emitter(c, out).json(h);
  }
  return kPass;
}

struct Row {
  std::string check;
  double residual;
  double tol;
  bool passed() const { return residual <= tol; }
};

int report_rows(const Config& c, std::ostream& out, Json h, const std::vector<Row>& rows) {
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.passed();
  if (want_csv(c, false)) {
    std::string s = csv_header(h) + "check,residual,tol,pass\n";
    for (const auto& r : rows)
      s += r.check + "," + fmt17(r.residual) + "," + fmt17(r.tol) + "," + (r.passed() ? "true" : "false") + "\n";
    Emitter(c, out).write(s);
  } else {
    Json checks = Json::array();
    for (const auto& r : rows)
      checks.push_back({{"check", r.check}, {"residual", r.residual}, {"tol", r.tol}, {"pass", r.passed()}});
    h["checks"] = std::move(checks);
    h["passed"] = ok;
    Emitter(c, out).json(h);
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_chain(const Config& c, std::ostream& out) {
  const SpinChainSpec spec = chain_spec(c);
  const double alg_tol = c.tol.value_or(1e-10);
  const double spec_tol = c.tol.value_or(1e-8);
  const LocalOps ops = build_local_ops(spec.r);
  std::vector<Row> rows;
  rows.push_back({"local_algebra", verify_local_algebra(spec.r, ops).max_residual(), alg_tol});
  const ChainOperators psi = build_chain_operators(spec, ops);
  const SparseOp h_spin = build_hamiltonian_spin(spec, ops);
  rows.push_back({"mpo_crs", verify_mpo_crs(spec, psi).max_residual(), alg_tol});
  rows.push_back({"H_spin-H_para", max_abs(SparseOp(h_spin - build_hamiltonian_para(spec, ops, psi))), alg_tol});
  const SpectrumReport sr = spectrum_crosscheck(spec, ops);
  const double radius = std::max(1.0, sr.spectral_radius);
  rows.push_back({"spectrum_gap", sr.max_eigenvalue_gap / radius, spec_tol});
  rows.push_back({"spectrum_imag", sr.max_imag / radius, spec_tol});
  Json tol = {{"algebra", alg_tol}, {"spectrum_relative", spec_tol}};
  if (c.beta) {
    tol["thermal_relative"] = spec_tol;
    rows.push_back({"thermal", thermal_crosscheck(spec, ops, *c.beta).max_relative_error, spec_tol});
  }
  Json h = header("chain", c, spec.r, tol);
  h["N"] = spec.sites;
  h["J"] = spec.j;
  h["mu"] = spec.mu;
  if (c.beta) h["beta"] = *c.beta;
  h["levels"] = sr.levels;
  h["spectral_radius"] = sr.spectral_radius;
  h["multiset_match"] = sr.multiset_match;
  h["max_imag"] = sr.max_imag;
  return report_rows(c, out, std::move(h), rows);
}

int cmd_selftest(const Config& c, std::ostream& out) {
  SelftestOptions opts;
  opts.suites = c.suites;
  opts.tol = c.tol;
  opts.seed = c.seed;
  const auto checks = run_selftest(opts);
  Json h = header("selftest", c, std::nullopt, c.tol ? Json{{"override", *c.tol}} : Json{{"override", nullptr}});
  bool ok = true;
  for (const auto& k : checks) ok = ok && k.passed();
  if (want_csv(c, false)) {
    std::string s = csv_header(h) + "suite,case,fingerprint,residual,tol,pass\n";
    for (const auto& k : checks)
      s += k.suite + "," + k.name + "," + io::hex64(k.fingerprint) + "," + fmt17(k.residual) + "," +
           fmt17(k.tol) + "," + (k.passed() ? "true" : "false") + "\n";
    Emitter(c, out).write(s);
  } else {
    Json rows = Json::array();
    for (const auto& k : checks)
      rows.push_back({{"suite", k.suite},
                      {"case", k.name},
                      {"fingerprint", io::hex64(k.fingerprint)},
                      {"residual", k.residual},
                      {"tol", k.tol},
                      {"pass", k.passed()}});
    h["checks"] = std::move(rows);
    h["passed"] = ok;
    Emitter(c, out).json(h);
  }
  return ok ? kPass : kCheckFailed;
}

void add_shared(CLI::App* sub, Config& c, bool with_r = true) {
  if (with_r) {
    sub->add_option("--builtin", c.builtin_name, "ex1|ex2|ex3|ex4|fermion|boson");
    sub->add_option("--m", c.m, "internal dimension of a built-in")->check(CLI::Range(1, 64));
    sub->add_option("--file", c.file, "R-matrix JSON file");
    sub->add_flag("--negate", c.negate, "use -R");
    sub->add_flag("--no-validate", c.no_validate, "skip the YBE check when loading --file");
  }
  sub->add_option("--out", c.out_path, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", c.tol, "override the check tolerance")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "seed for randomized checks");
  sub->add_option("--threads", c.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
}

void add_chain(CLI::App* sub, Config& c) {
  sub->add_option("--N", c.sites, "number of sites / modes");
  sub->add_option("--J", c.j, "hopping amplitudes, comma separated or one broadcast value")->delimiter(',');
  sub->add_option("--mu", c.mu, "chemical potentials, comma separated or one broadcast value")->delimiter(',');
  sub->add_option("--spec", c.spec_path, "chain spec JSON instead of --N/--J/--mu");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paraparticle statistics toolkit", "parastat"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config c;

  auto* ybe = app.add_subcommand("ybe", "check R^2 = 1 and the braid relation");
  add_shared(ybe, c);

  auto* excl = app.add_subcommand("exclusion", "exclusion statistics d_0..d_nmax");
  add_shared(excl, c);
  excl->add_option("--nmax", c.nmax, "largest particle number")->check(CLI::Range(0, 64));

  auto* series = app.add_subcommand("series", "Hilbert series and the z_R(-x) z_{-R}(x) = 1 check");
  add_shared(series, c);
  series->add_option("--K", c.order, "series order");

  auto* thermo = app.add_subcommand("thermo", "single-mode occupation curves");
  add_shared(thermo, c);
  thermo->add_option("--grid", c.grid, "START:STOP:STEP or comma list of beta*eps");

  auto* gas = app.add_subcommand("freegas", "free paraparticle gas on a chain of modes");
  add_shared(gas, c);
  add_chain(gas, c);
  gas->add_option("--beta", c.beta, "inverse temperature")->check(CLI::PositiveNumber);
  gas->add_option("--t", c.time, "time for the unequal-time number commutator");

  auto* chain = app.add_subcommand("chain", "spin-chain cross-checks");
  add_shared(chain, c);
  add_chain(chain, c);
  chain->add_option("--beta", c.beta, "also compare thermal occupations at this beta")->check(CLI::PositiveNumber);

  auto* self = app.add_subcommand("selftest", "run the property suites");
  add_shared(self, c, false);
  self->add_option("--suite", c.suites, "restrict to these suites")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(e.what()) + "\n" : app.help());
      return kPass;
    }
    err << "parastat: " << e.what() << "\n";
    return kUsage;
  }

  if (c.threads > 0) kernels::set_thread_count(c.threads);

  try {
    if (ybe->parsed()) return cmd_ybe(c, out);
    if (excl->parsed()) return cmd_exclusion(c, out);
    if (series->parsed()) return cmd_series(c, out);
    if (thermo->parsed()) return cmd_thermo(c, out);
    if (gas->parsed()) return cmd_freegas(c, out);
    if (chain->parsed()) return cmd_chain(c, out);
    return cmd_selftest(c, out);
  } catch (const ResourceError& e) {
    err << "parastat: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const ConstraintError& e) {
    err << "parastat: check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const Error& e) {
    err << "parastat: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "parastat: out of memory\n";
    return kResource;
  }
}

}  // namespace parastat::cli

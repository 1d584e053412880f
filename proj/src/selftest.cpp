#include "parastat/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "parastat/bilinears.hpp"
#include "parastat/errors.hpp"
#include "parastat/fockspace.hpp"
#include "parastat/freegas.hpp"
#include "parastat/rmatrix.hpp"
#include "parastat/spinchain.hpp"

namespace parastat {

bool SelftestCheck::passed() const { return residual <= tol; }

const std::vector<std::string>& selftest_suites() {
  static const std::vector<std::string> names = {
      "ybe", "exclusion", "series", "factorization", "crs", "glN", "ladder",
      "locality", "localops", "mpo", "spectrum", "thermal", "pt"};
  return names;
}

namespace {

struct Runner {
  const SelftestOptions& opts;
  std::vector<SelftestCheck> out;

  void add(const std::string& suite, const std::string& name, const RMatrix& r, double residual,
           double tol) {
    out.push_back({suite, name, r.fingerprint(), residual, opts.tol.value_or(tol)});
  }
};

double int_gap(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  if (a.size() != b.size()) return INFINITY;
  std::int64_t worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return static_cast<double>(worst);
}

std::string tag(const RMatrix& r) { return r.label(); }

std::string tag(const RMatrix& r, const char* what, int n) {
  return r.label() + " " + what + "=" + std::to_string(n);
}

struct ModeCase {
  RMatrix r;
  int modes;
};

std::vector<ModeCase> algebra_cases() {
  return {{builtin(Builtin::fermion, 1), 3},
          {builtin(Builtin::ex1, 2), 2},
          {builtin(Builtin::ex3, 2), 3},
          {builtin(Builtin::ex4, 3), 2}};
}

struct ChainCase {
  RMatrix r;
  int sites;
};

SpinChainSpec random_chain(const RMatrix& r, int sites, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coupling(0.2, 1.2), field(-1.0, 1.0);
  std::vector<double> j(sites - 1), mu(sites);
  for (auto& v : j) v = coupling(rng);
  for (auto& v : mu) v = field(rng);
  return SpinChainSpec::make(r, sites, std::move(j), std::move(mu));
}

void suite_ybe(Runner& run) {
  std::vector<RMatrix> rs = {builtin(Builtin::fermion, 1), builtin(Builtin::boson, 1)};
  for (Builtin b : {Builtin::ex1, Builtin::ex2, Builtin::ex3, Builtin::ex4})
    for (int m : {2, 3, 5}) rs.push_back(builtin(b, m));
  for (const auto& r : rs) run.add("ybe", tag(r), r, ybe_check(r).max_residual, 1e-12);
}

void suite_exclusion(Runner& run) {
  for (Builtin b : {Builtin::ex1, Builtin::ex2, Builtin::ex3, Builtin::ex4})
    for (int m = 2; m <= 4; ++m) {
      const RMatrix r = builtin(b, m);
      const auto d = exclusion_statistics(r, 5);
      run.add("exclusion", tag(r, "nmax", 5), r,
              int_gap({d.begin(), d.end()}, r.hilbert_closed_form()->coefficients(6)), 0.0);
    }
}

void suite_series(Runner& run) {
  const int m = 3, order = 6;
  const RMatrix r = negate(builtin(Builtin::ex4, m));
  const HilbertSeries hs = hilbert_series(r, 4);
  IntPoly rec = {1, m, m * m - 1};
  while (rec.size() < 5) rec.push_back(m * rec[rec.size() - 1] - rec[rec.size() - 2]);
  run.add("series", r.label() + " recursion", r, int_gap(hs.coefficients, rec), 0.0);
  run.add("series", r.label() + " closed form", r,
          int_gap(hs.coefficients, r.hilbert_closed_form()->coefficients(5)), 0.0);
  const RMatrix base = builtin(Builtin::ex4, m);
  const ReciprocityReport rep = series_reciprocity_check(base, order);
  run.add("series", base.label() + " reciprocity order 6", base, static_cast<double>(rep.max_coeff_error), 0.0);
}

void suite_factorization(Runner& run) {
  std::vector<RMatrix> rs = {builtin(Builtin::fermion, 1), builtin(Builtin::ex1, 2),
                             builtin(Builtin::ex3, 2), builtin(Builtin::ex4, 2)};
  for (const auto& r : rs)
    for (int modes : {2, 3}) {
      const FockBasis basis = build_basis(r, 4, modes);
      const auto dims = basis.sector_dims();
      const IntPoly want = r.hilbert_closed_form()->power(modes).coefficients(5);
      run.add("factorization", tag(r, "modes", modes), r, int_gap({dims.begin(), dims.end()}, want),
              0.0);
    }
}

void suite_algebra(Runner& run, const std::string& which) {
  for (const auto& c : algebra_cases()) {
    const FockBasis basis = build_basis(c.r, *natural_nmax(c.r, c.modes), c.modes);
    const LadderSet ops = ladder_operators(basis);
    const std::string name = tag(c.r, "modes", c.modes);
    if (which == "crs") {
      run.add("crs", name, c.r, verify_crs(basis, ops).max_residual(), 1e-10);
      continue;
    }
    const BilinearSet bil = build_bilinears(basis, ops);
    if (which == "glN") {
      run.add("glN", name, c.r, verify_glN(bil).max_residual, 1e-10);
    } else if (which == "ladder") {
      run.add("ladder", name, c.r, verify_ladder_commutators(basis, ops, bil).max_residual(), 1e-10);
    } else if (c.modes >= 2) {
      std::set<int> s2;
      for (int a = 1; a < c.modes; ++a) s2.insert(a);
      const LocalityReport rep = locality_check(bil, {0}, s2, 2, run.opts.seed);
      run.add("locality", name, c.r, rep.max_residual, 1e-10);
    }
  }
}

void suite_localops(Runner& run) {
  for (const RMatrix& r : {builtin(Builtin::fermion, 1), builtin(Builtin::ex1, 2),
                           builtin(Builtin::ex2, 2), builtin(Builtin::ex3, 2),
                           builtin(Builtin::ex4, 3)}) {
    const LocalOps ops = build_local_ops(r);
    run.add("localops", tag(r), r, verify_local_algebra(r, ops).max_residual(), 1e-10);
  }
}

void suite_mpo(Runner& run) {
  std::mt19937_64 rng(run.opts.seed);
  for (const ChainCase& c : {ChainCase{builtin(Builtin::fermion, 1), 4},
                             ChainCase{builtin(Builtin::ex3, 2), 3},
                             ChainCase{builtin(Builtin::ex4, 3), 2}}) {
    const SpinChainSpec spec = random_chain(c.r, c.sites, rng);
    const LocalOps ops = build_local_ops(c.r);
    const ChainOperators psi = build_chain_operators(spec, ops);
    const std::string name = tag(c.r, "N", c.sites);
    run.add("mpo", name + " crs", c.r, verify_mpo_crs(spec, psi).max_residual(), 1e-10);
    const SparseOp diff = build_hamiltonian_spin(spec, ops) - build_hamiltonian_para(spec, ops, psi);
    run.add("mpo", name + " H_spin-H_para", c.r, max_abs(diff), 1e-10);
  }
}

void suite_spectrum(Runner& run) {
  std::mt19937_64 rng(run.opts.seed + 1);
  for (const ChainCase& c : {ChainCase{builtin(Builtin::fermion, 1), 6},
                             ChainCase{builtin(Builtin::ex3, 2), 4},
                             ChainCase{builtin(Builtin::ex4, 3), 3}}) {
    const SpinChainSpec spec = random_chain(c.r, c.sites, rng);
    const SpectrumReport rep = spectrum_crosscheck(spec, build_local_ops(c.r));
    run.add("spectrum", tag(c.r, "N", c.sites), c.r,
            rep.max_eigenvalue_gap / std::max(1.0, rep.spectral_radius), 1e-8);
  }
}

void suite_thermal(Runner& run) {
  std::mt19937_64 rng(run.opts.seed + 2);
  for (const ChainCase& c : {ChainCase{builtin(Builtin::ex3, 2), 3},
                             ChainCase{builtin(Builtin::ex4, 3), 2}}) {
    const SpinChainSpec spec = random_chain(c.r, c.sites, rng);
    const ThermalReport rep = thermal_crosscheck(spec, build_local_ops(c.r), 0.7);
    run.add("thermal", tag(c.r, "N", c.sites), c.r, rep.max_relative_error, 1e-8);
  }
}

void suite_pt(Runner& run) {
  std::mt19937_64 rng(run.opts.seed + 3);
  const RMatrix r = builtin(Builtin::ex4, 3);
  const LocalOps ops = build_local_ops(r);
  for (int draw = 0; draw < 3; ++draw) {
    const SpinChainSpec spec = random_chain(r, 3, rng);
    const auto spectrum = exact_diagonalize(build_hamiltonian_spin(spec, ops));
    double radius = 0.0, imag = 0.0;
    for (const cplx& e : spectrum) {
      radius = std::max(radius, std::abs(e));
      imag = std::max(imag, std::abs(e.imag()));
    }
    run.add("pt", tag(r, "draw", draw), r, imag / std::max(radius, 1e-300), 1e-8);
  }
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& opts) {
  for (const auto& s : opts.suites)
    if (std::find(selftest_suites().begin(), selftest_suites().end(), s) == selftest_suites().end())
      throw ShapeError("unknown selftest suite '" + s + "'");

  Runner run{opts, {}};
  const std::vector<std::pair<std::string, std::function<void()>>> table = {
      {"ybe", [&] { suite_ybe(run); }},
      {"exclusion", [&] { suite_exclusion(run); }},
      {"series", [&] { suite_series(run); }},
      {"factorization", [&] { suite_factorization(run); }},
      {"crs", [&] { suite_algebra(run, "crs"); }},
      {"glN", [&] { suite_algebra(run, "glN"); }},
      {"ladder", [&] { suite_algebra(run, "ladder"); }},
      {"locality", [&] { suite_algebra(run, "locality"); }},
      {"localops", [&] { suite_localops(run); }},
      {"mpo", [&] { suite_mpo(run); }},
      {"spectrum", [&] { suite_spectrum(run); }},
      {"thermal", [&] { suite_thermal(run); }},
      {"pt", [&] { suite_pt(run); }},
  };
  for (const auto& [name, fn] : table)
    if (opts.suites.empty() || std::find(opts.suites.begin(), opts.suites.end(), name) != opts.suites.end())
      fn();
  return std::move(run.out);
}

}  // namespace parastat

#include "parastat/spinchain.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "parastat/budget.hpp"
#include "parastat/errors.hpp"
#include "parastat/kernels.hpp"

namespace parastat {
namespace {

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

SparseOp sparse_identity(Eigen::Index n) {
  SparseOp id(n, n);
  id.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) id.insert(i, i) = 1.0;
  id.makeCompressed();
  return id;
}

SparseOp to_sparse(const CMatrix& a) {
  SparseOp s = a.sparseView(1.0, 0.0);
  s.makeCompressed();
  return s;
}

// Rows r * m + i of a matrix whose rows are rank-(n+1) tensors: the slice with
// the last tensor index fixed to i.
CMatrix last_index_rows(const CMatrix& a, int m, int i) {
  const Eigen::Index count = a.rows() / m;
  CMatrix out(count, a.cols());
  for (Eigen::Index r = 0; r < count; ++r) out.row(r) = a.row(r * m + i);
  return out;
}

// x- raw map: b_n = 1 + R_{n-1,n} + R_{n-1,n} R_{n-2,n-1} + ... (1-based slots),
// the removed index sits in the last slot.
CMatrix lower_from_right(const RMatrix& r, int n, const CMatrix& tensors) {
  if (n == 1) return tensors;
  CMatrix y = tensors;
  for (int j = 0; j <= n - 2; ++j)
    y = tensors + kernels::apply_two_slot(r.matrix(), r.m(), n, j, y);
  return y;
}

double pair_relation(const std::vector<CMatrix>& lhs_a, const std::vector<CMatrix>& lhs_b,
                     const std::vector<CMatrix>& rhs_c, const std::vector<CMatrix>& rhs_d,
                     const RMatrix& r, bool delta,
                     const std::function<cplx(int, int, int, int)>& coef) {
  const int m = r.m();
  const Eigen::Index dim = lhs_a[0].rows();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      CMatrix res = lhs_a[i] * lhs_b[j];
      if (delta && i == j) res -= CMatrix::Identity(dim, dim);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const cplx c = coef(i, j, k, l);
          if (c != cplx(0.0, 0.0)) res -= c * rhs_c[k] * rhs_d[l];
        }
      worst = std::max(worst, max_abs(res));
    }
  return worst;
}

// String identities behind the Hamiltonian mapping:
//   Σ_i S^{ib} T^{ic} = δ_bc,   Σ_b y+_b T^{bc} = x+_c,   Σ_b S^{bc} y-_b = x-_c.
double string_exchange_residual(const LocalOps& ops) {
  const int m = ops.m;
  const CMatrix id = CMatrix::Identity(ops.dim, ops.dim);
  double worst = 0.0;
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) {
      CMatrix st = b == c ? CMatrix(-id) : CMatrix::Zero(ops.dim, ops.dim);
      for (int i = 0; i < m; ++i) st += ops.S(i, b) * ops.T(i, c);
      worst = std::max(worst, max_abs(st));
    }
  for (int c = 0; c < m; ++c) {
    CMatrix up = -ops.x_plus[c], down = -ops.x_minus[c];
    for (int b = 0; b < m; ++b) {
      up += ops.y_plus[b] * ops.T(b, c);
      down += ops.S(b, c) * ops.y_minus[b];
    }
    worst = std::max({worst, max_abs(up), max_abs(down)});
  }
  return worst;
}

// X_b B^{ce} = Σ_{fg} coef(b,c,f,g) B^{fe} X_g   (x_first), or
// B^{ce} X_b = Σ_{fg} coef(b,c,f,g) X_g B^{fe}.
double crossing(const std::vector<CMatrix>& x, const std::vector<CMatrix>& bond, bool x_first,
                const std::function<cplx(int, int, int, int)>& coef) {
  const int m = static_cast<int>(x.size());
  double worst = 0.0;
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c)
      for (int e = 0; e < m; ++e) {
        CMatrix res = x_first ? CMatrix(x[b] * bond[c * m + e]) : CMatrix(bond[c * m + e] * x[b]);
        for (int f = 0; f < m; ++f)
          for (int g = 0; g < m; ++g) {
            const cplx k = coef(b, c, f, g);
            if (k == cplx(0.0, 0.0)) continue;
            res -= k * (x_first ? CMatrix(bond[f * m + e] * x[g]) : CMatrix(x[g] * bond[f * m + e]));
          }
        worst = std::max(worst, max_abs(res));
      }
  return worst;
}

// B^{ib} B^{jc} = Σ left(i,j,k,l) right(b,c,p,q) B^{kp} B^{lq}
double bond_exchange(const std::vector<CMatrix>& bond, int m,
                     const std::function<cplx(int, int, int, int)>& left,
                     const std::function<cplx(int, int, int, int)>& right) {
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < m; ++c) {
          CMatrix res = bond[i * m + b] * bond[j * m + c];
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              const cplx kl = left(i, j, k, l);
              if (kl == cplx(0.0, 0.0)) continue;
              for (int p = 0; p < m; ++p)
                for (int q = 0; q < m; ++q) {
                  const cplx pq = right(b, c, p, q);
                  if (pq != cplx(0.0, 0.0)) res -= kl * pq * bond[k * m + p] * bond[l * m + q];
                }
            }
          worst = std::max(worst, max_abs(res));
        }
  return worst;
}

double string_crossing_residual(const RMatrix& r, const LocalOps& ops) {
  const auto& yp = ops.y_plus;
  const auto& ym = ops.y_minus;
  return std::max({
      crossing(yp, ops.s, true, [&](int b, int c, int f, int g) { return r(f, g, b, c); }),
      crossing(yp, ops.s, false, [&](int b, int c, int f, int g) { return r(g, f, c, b); }),
      crossing(yp, ops.t, false, [&](int b, int c, int f, int g) { return r(c, g, b, f); }),
      crossing(ym, ops.s, true, [&](int b, int c, int f, int g) { return r(b, f, c, g); }),
      crossing(ym, ops.t, true, [&](int b, int c, int f, int g) { return r(c, b, g, f); }),
      crossing(ym, ops.t, false, [&](int b, int c, int f, int g) { return r(b, c, f, g); }),
      bond_exchange(
          ops.s, ops.m, [&](int i, int j, int k, int l) { return r(k, l, i, j); },
          [&](int b, int c, int p, int q) { return r(b, c, p, q); }),
      bond_exchange(
          ops.t, ops.m, [&](int i, int j, int k, int l) { return r(j, i, l, k); },
          [&](int b, int c, int p, int q) { return r(q, p, c, b); }),
  });
}

}  // namespace

LocalOps build_local_ops(const RMatrix& r, double tol) {
  const auto deg = natural_nmax(r, 1);
  if (!deg) throw UnsupportedError("local Hilbert space is infinite: the Hilbert series of " +
                                   r.label() + " does not terminate");
  const FockBasis basis = build_basis(r, *deg, 1);
  const LadderSet ladders = ladder_operators(basis);
  const int m = r.m();
  const int dim = basis.total_dim();
  LocalOps ops;
  ops.m = m;
  ops.dim = dim;
  ops.labels = basis.labels();
  ops.y_plus = ladders.plus;
  ops.y_minus = ladders.minus;
  ops.number = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) ops.number(k, k) = ops.labels[k].n;

  std::vector<CMatrix> kers;
  for (const auto& s : basis.sectors()) kers.push_back(s.coord_map * s.right * s.core);
  ops.x_plus.assign(m, CMatrix::Zero(dim, dim));
  ops.x_minus.assign(m, CMatrix::Zero(dim, dim));
  for (int n = 0; n <= basis.n_max(); ++n) {
    const Sector& here = basis.sector(n);
    if (here.dim() == 0) continue;
    if (n < basis.n_max() && basis.sector(n + 1).dim() > 0) {
      const Sector& up = basis.sector(n + 1);
      for (int i = 0; i < m; ++i) {
        // P(Ψ ⊗ e_i): only rows with last index i of the left space contribute.
        const CMatrix block = kers[n + 1] * last_index_rows(up.left, m, i).adjoint() * here.states;
        ops.x_plus[i].block(basis.offset(n + 1), basis.offset(n), block.rows(), block.cols()) = block;
      }
    }
    if (n >= 1 && basis.sector(n - 1).dim() > 0) {
      const Sector& down = basis.sector(n - 1);
      const CMatrix lowered = lower_from_right(r, n, here.states);
      for (int i = 0; i < m; ++i) {
        const CMatrix block = kers[n - 1] * down.left.adjoint() * last_index_rows(lowered, m, i);
        ops.x_minus[i].block(basis.offset(n - 1), basis.offset(n), block.rows(), block.cols()) =
            block;
      }
    }
  }
  ops.s.resize(static_cast<std::size_t>(m) * m);
  ops.t.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ops.s[i * m + j] = -commutator(ops.y_plus[i], ops.x_minus[j]);
      ops.t[i * m + j] = commutator(ops.y_minus[i], ops.x_plus[j]);
    }
  const LocalAlgebraReport rep = verify_local_algebra(r, ops);
  if (rep.max_residual() > tol)
    throw ConstraintError("local spin algebra fails for " + r.label() + ": residual " +
                          std::to_string(rep.max_residual()));
  return ops;
}

double LocalAlgebraReport::max_residual() const {
  double w = std::max({number_sum, number_shift, string_exchange, string_crossing});
  for (double v : relations) w = std::max(w, v);
  return w;
}

LocalAlgebraReport verify_local_algebra(const RMatrix& r, const LocalOps& ops) {
  LocalAlgebraReport rep;
  const auto& xp = ops.x_plus;
  const auto& xm = ops.x_minus;
  const auto& yp = ops.y_plus;
  const auto& ym = ops.y_minus;
  rep.relations[0] = pair_relation(ym, yp, yp, ym, r, true,
                                   [&](int i, int j, int k, int l) { return r(i, k, j, l); });
  rep.relations[1] = pair_relation(yp, yp, yp, yp, r, false,
                                   [&](int i, int j, int k, int l) { return r(k, l, i, j); });
  rep.relations[2] = pair_relation(ym, ym, ym, ym, r, false,
                                   [&](int i, int j, int k, int l) { return r(j, i, l, k); });
  rep.relations[3] = pair_relation(xm, xp, xp, xm, r, true,
                                   [&](int i, int j, int k, int l) { return r(k, i, l, j); });
  rep.relations[4] = pair_relation(xp, xp, xp, xp, r, false,
                                   [&](int i, int j, int k, int l) { return r(l, k, j, i); });
  rep.relations[5] = pair_relation(xm, xm, xm, xm, r, false,
                                   [&](int i, int j, int k, int l) { return r(i, j, k, l); });
  const int m = ops.m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      rep.relations[6] = std::max({rep.relations[6], max_abs(commutator(xp[i], yp[j])),
                                   max_abs(commutator(xm[i], ym[j]))});
  CMatrix sx = CMatrix::Zero(ops.dim, ops.dim), sy = sx;
  for (int i = 0; i < m; ++i) {
    sx += xp[i] * xm[i];
    sy += yp[i] * ym[i];
  }
  rep.number_sum = std::max(max_abs(CMatrix(sx - ops.number)), max_abs(CMatrix(sy - ops.number)));
  for (int i = 0; i < m; ++i)
    for (const auto* fam : {&xp, &yp})
      rep.number_shift = std::max(
          rep.number_shift, max_abs(CMatrix(commutator(ops.number, (*fam)[i]) - (*fam)[i])));
  for (int i = 0; i < m; ++i)
    for (const auto* fam : {&xm, &ym})
      rep.number_shift = std::max(
          rep.number_shift, max_abs(CMatrix(commutator(ops.number, (*fam)[i]) + (*fam)[i])));
  rep.string_exchange = string_exchange_residual(ops);
  rep.string_crossing = string_crossing_residual(r, ops);
  return rep;
}

SpinChainSpec SpinChainSpec::make(RMatrix r, int sites, std::vector<double> j,
                                  std::vector<double> mu) {
  if (sites < 1) throw ShapeError("chain needs at least one site");
  if (static_cast<int>(j.size()) == sites - 1) j.push_back(0.0);
  if (static_cast<int>(j.size()) != sites)
    throw ShapeError("J must have " + std::to_string(sites - 1) + " or " +
                     std::to_string(sites) + " entries, got " + std::to_string(j.size()));
  if (j.back() != 0.0) throw ConstraintError("open chain requires J_N = 0");
  if (static_cast<int>(mu.size()) != sites)
    throw ShapeError("mu must have " + std::to_string(sites) + " entries, got " +
                     std::to_string(mu.size()));
  return SpinChainSpec{std::move(r), sites, std::move(j), std::move(mu)};
}

CMatrix SpinChainSpec::hopping_matrix() const {
  CMatrix h = CMatrix::Zero(sites, sites);
  for (int a = 0; a < sites; ++a) {
    h(a, a) = -mu[a];
    if (a + 1 < sites) h(a, a + 1) = h(a + 1, a) = j[a];
  }
  return h;
}

SparseOp embed_site(const CMatrix& op, int site, int sites) {
  if (site < 0 || site >= sites)
    throw ShapeError("site " + std::to_string(site) + " outside chain of " +
                     std::to_string(sites));
  const Eigen::Index d = op.rows();
  std::vector<SparseOp> factors(sites, sparse_identity(d));
  factors[site] = to_sparse(op);
  return kernels::sparse_kron_chain(factors);
}

namespace {

std::size_t chain_dim(const LocalOps& ops, int sites) {
  const std::size_t dim = checked_pow(ops.dim, sites, dimension_budget());
  require_within_budget(dim, "spin chain Hilbert space");
  return dim;
}

}  // namespace

SparseOp build_hamiltonian_spin(const SpinChainSpec& spec, const LocalOps& ops) {
  if (spec.r.m() != ops.m) throw ShapeError("local operators do not match the R-matrix");
  const auto dim = static_cast<Eigen::Index>(chain_dim(ops, spec.sites));
  SparseOp h(dim, dim);
  CMatrix number = CMatrix::Zero(ops.dim, ops.dim);
  for (int i = 0; i < ops.m; ++i) number += ops.y_plus[i] * ops.y_minus[i];
  for (int a = 0; a < spec.sites; ++a) {
    if (spec.mu[a] != 0.0) h -= spec.mu[a] * embed_site(number, a, spec.sites);
    if (a + 1 >= spec.sites || spec.j[a] == 0.0) continue;
    for (int i = 0; i < ops.m; ++i) {
      h += spec.j[a] * SparseOp(embed_site(ops.x_plus[i], a, spec.sites) *
                                embed_site(ops.y_minus[i], a + 1, spec.sites));
      h += spec.j[a] * SparseOp(embed_site(ops.x_minus[i], a, spec.sites) *
                                embed_site(ops.y_plus[i], a + 1, spec.sites));
    }
  }
  h.prune(cplx(0.0, 0.0));
  return h;
}

SparseOp mpo_jwt(const SpinChainSpec& spec, const LocalOps& ops, int site, int internal,
                 int sign) {
  const int m = ops.m;
  if (site < 0 || site >= spec.sites || internal < 0 || internal >= m)
    throw ShapeError("ladder index out of range");
  chain_dim(ops, spec.sites);
  const auto& ends = sign > 0 ? ops.y_plus : ops.y_minus;
  // ψ+ carries the S string and ψ- the T string; with this pairing the strings
  // of ψ+_{a,i} ψ-_{b,i} cancel site by site.
  const auto& bond = sign > 0 ? ops.s : ops.t;
  // open[b]: the string on sites 0..k with its free auxiliary index fixed to b.
  std::vector<SparseOp> open(m);
  for (int b = 0; b < m; ++b)
    open[b] = b == internal ? sparse_identity(1) : SparseOp(1, 1);
  for (int k = 0; k < site; ++k) {
    std::vector<SparseOp> next(m);
    for (int c = 0; c < m; ++c) {
      SparseOp acc;
      for (int b = 0; b < m; ++b) {
        if (open[b].nonZeros() == 0) continue;
        SparseOp term = kernels::sparse_kron(open[b], to_sparse(bond[b * m + c]));
        acc = acc.size() == 0 ? term : SparseOp(acc + term);
      }
      if (acc.size() == 0) {
        const Eigen::Index d = open[0].rows() * ops.dim;
        acc = SparseOp(d, d);
      }
      next[c] = std::move(acc);
    }
    open = std::move(next);
  }
  const Eigen::Index left = open[0].rows();
  SparseOp out(left * ops.dim, left * ops.dim);
  for (int b = 0; b < m; ++b)
    if (open[b].nonZeros() > 0) out += kernels::sparse_kron(open[b], to_sparse(ends[b]));
  if (site + 1 < spec.sites) {
    std::vector<SparseOp> rest(spec.sites - site - 1, sparse_identity(ops.dim));
    out = kernels::sparse_kron(out, kernels::sparse_kron_chain(rest));
  }
  out.prune(cplx(0.0, 0.0));
  return out;
}

ChainOperators build_chain_operators(const SpinChainSpec& spec, const LocalOps& ops) {
  ChainOperators psi;
  const int count = spec.sites * ops.m;
  psi.psi_plus.resize(count);
  psi.psi_minus.resize(count);
  for (int a = 0; a < spec.sites; ++a)
    for (int i = 0; i < ops.m; ++i) {
      psi.psi_plus[a * ops.m + i] = mpo_jwt(spec, ops, a, i, +1);
      psi.psi_minus[a * ops.m + i] = mpo_jwt(spec, ops, a, i, -1);
    }
  return psi;
}

SparseOp build_hamiltonian_para(const SpinChainSpec& spec, const LocalOps& ops,
                                const ChainOperators& psi) {
  const CMatrix hop = spec.hopping_matrix();
  const int m = ops.m;
  const Eigen::Index dim = psi.psi_plus.at(0).rows();
  SparseOp h(dim, dim);
  for (int a = 0; a < spec.sites; ++a)
    for (int b = 0; b < spec.sites; ++b) {
      if (hop(a, b) == cplx(0.0, 0.0)) continue;
      for (int i = 0; i < m; ++i)
        h += hop(a, b) * SparseOp(psi.psi_plus[a * m + i] * psi.psi_minus[b * m + i]);
    }
  h.prune(cplx(0.0, 0.0));
  return h;
}

double MpoCrReport::max_residual() const {
  return std::max({annihilate_create, create_create, annihilate_annihilate});
}

MpoCrReport verify_mpo_crs(const SpinChainSpec& spec, const ChainOperators& psi) {
  std::vector<CMatrix> plus, minus;
  for (const auto& p : psi.psi_plus) plus.emplace_back(CMatrix(p));
  for (const auto& p : psi.psi_minus) minus.emplace_back(CMatrix(p));
  const int columns = plus.empty() ? 0 : static_cast<int>(plus[0].cols());
  const CrReport cr = cr_residuals(spec.r, spec.sites, plus, minus, columns);
  return {cr.annihilate_create, cr.create_create, cr.annihilate_annihilate};
}

std::vector<cplx> exact_diagonalize(const CMatrix& h) {
  std::vector<cplx> out;
  if (h.rows() == 0) return out;
  const double scale = std::max(1.0, max_abs(h));
  if (is_hermitian(h, 1e-12 * scale)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < h.rows(); ++k) out.emplace_back(es.eigenvalues()(k), 0.0);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(h, false);
    for (Eigen::Index k = 0; k < h.rows(); ++k) out.push_back(es.eigenvalues()(k));
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<cplx> exact_diagonalize(const SparseOp& h) {
  require_within_budget(static_cast<std::size_t>(h.rows()), "exact diagonalization");
  return exact_diagonalize(CMatrix(h));
}

std::vector<double> free_particle_spectrum(const Eigen::VectorXd& eps, const IntPoly& d) {
  std::size_t per_mode = 0;
  for (auto v : d) per_mode += static_cast<std::size_t>(std::max<std::int64_t>(v, 0));
  require_within_budget(checked_pow(per_mode, static_cast<int>(eps.size()), dimension_budget()),
                        "free-particle spectrum");
  std::vector<double> levels{0.0};
  for (Eigen::Index k = 0; k < eps.size(); ++k) {
    std::vector<double> next;
    for (double e : levels)
      for (std::size_t n = 0; n < d.size(); ++n)
        for (std::int64_t c = 0; c < d[n]; ++c) next.push_back(e + static_cast<double>(n) * eps(k));
    levels = std::move(next);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

SpectrumReport spectrum_crosscheck(const SpinChainSpec& spec, const LocalOps& ops) {
  const auto deg = natural_nmax(spec.r, 1);
  if (!deg) throw UnsupportedError("free-particle spectrum needs a finite local space");
  IntPoly d;
  if (spec.r.hilbert_closed_form()) {
    d = spec.r.hilbert_closed_form()->coefficients(*deg + 1);
  } else {
    for (int v : exclusion_statistics(spec.r, *deg)) d.push_back(v);
  }
  const ModeSolution modes = diagonalize(spec.hopping_matrix());
  const std::vector<double> predicted = free_particle_spectrum(modes.epsilons, d);
  const std::vector<cplx> spectrum = exact_diagonalize(build_hamiltonian_spin(spec, ops));

  SpectrumReport rep;
  rep.levels = spectrum.size();
  for (const cplx& e : spectrum) {
    rep.spectral_radius = std::max(rep.spectral_radius, std::abs(e));
    rep.max_imag = std::max(rep.max_imag, std::abs(e.imag()));
  }
  if (predicted.size() != spectrum.size()) {
    rep.max_eigenvalue_gap = std::numeric_limits<double>::infinity();
    return rep;
  }
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    rep.max_eigenvalue_gap =
        std::max(rep.max_eigenvalue_gap, std::abs(spectrum[k] - cplx(predicted[k], 0.0)));
  rep.multiset_match = rep.max_eigenvalue_gap <= 1e-8 * std::max(1.0, rep.spectral_radius);
  return rep;
}

ThermalReport thermal_crosscheck(const SpinChainSpec& spec, const LocalOps& ops, double beta) {
  const ModeSolution modes = diagonalize(spec.hopping_matrix());
  const ChainOperators psi = build_chain_operators(spec, ops);
  const CMatrix h(build_hamiltonian_para(spec, ops, psi));
  const CMatrix rho = (-beta * h).exp();
  const cplx z = rho.trace();
  const int n = spec.sites;
  const int m = ops.m;

  std::vector<CMatrix> e(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      SparseOp acc(h.rows(), h.cols());
      for (int i = 0; i < m; ++i) acc += SparseOp(psi.psi_plus[a * m + i] * psi.psi_minus[b * m + i]);
      e[a * n + b] = CMatrix(acc);
    }

  ThermalReport rep;
  rep.predicted.resize(n);
  rep.traced.resize(n);
  for (int k = 0; k < n; ++k) {
    CMatrix nk = CMatrix::Zero(h.rows(), h.cols());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) nk += std::conj(modes.u(k, a)) * modes.u(k, b) * e[a * n + b];
    rep.traced(k) = ((rho * nk).trace() / z).real();
    rep.predicted(k) = mean_occupation_moment(spec.r, std::exp(-beta * modes.epsilons(k)), 1);
    rep.max_relative_error =
        std::max(rep.max_relative_error, std::abs(rep.traced(k) - rep.predicted(k)) /
                                             std::max(std::abs(rep.predicted(k)), 1.0));
  }
  return rep;
}

}  // namespace parastat

#include "parastat/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "parastat/budget.hpp"
#include "parastat/errors.hpp"
#include "parastat/kernels.hpp"

namespace parastat {
namespace {

// Anything below this is treated as a singular change of basis.
constexpr double kConditionFloor = 1e-10;

RMatrix collective_of(const RMatrix& r, int modes) {
  return modes == 1 ? r : direct_product(r, modes);
}

std::size_t tensor_dim(int base, int n) {
  return checked_pow(static_cast<std::size_t>(base), n, dimension_budget());
}

CMatrix checked_inverse(const CMatrix& a, const char* what) {
  if (a.rows() == 0) return a;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < kConditionFloor * std::max(1.0, s(0)))
    throw ConstraintError(std::string(what) + " is singular");
  return a.inverse();
}

// Single-mode tensor over C^m placed in mode `mode` of (C^{modes*m})^{⊗k}.
CVector embed_tensor(const CVector& t, int m, int k, int mode, int big) {
  CVector out = CVector::Zero(static_cast<Eigen::Index>(tensor_dim(big, k)));
  for (Eigen::Index idx = 0; idx < t.size(); ++idx) {
    if (t(idx) == cplx(0.0, 0.0)) continue;
    Eigen::Index rem = idx, target = 0, scale = 1;
    for (int s = 0; s < k; ++s) {
      const Eigen::Index digit = rem % m;
      rem /= m;
      target += (mode * m + digit) * scale;
      scale *= big;
    }
    out(target) = t(idx);
  }
  return out;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Occupation patterns of `modes` modes with total n, lexicographic order.
void occupations(int modes, int n, const std::vector<int>& degs, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  const int done = static_cast<int>(cur.size());
  if (done == modes) {
    if (n == 0) out.push_back(cur);
    return;
  }
  for (int k = 0; k <= n; ++k) {
    if (k >= static_cast<int>(degs.size()) || degs[k] == 0) continue;
    cur.push_back(k);
    occupations(modes, n - k, degs, cur, out);
    cur.pop_back();
  }
}

bool top_is_truncated(const RMatrix& coll, const std::vector<CMatrix>& right, int n_max) {
  if (const auto& h = coll.hilbert_closed_form()) {
    if (!h->is_polynomial()) return true;
    return n_max < h->degree();
  }
  if (right[n_max].cols() == 0) return false;
  const int big = coll.m();
  std::size_t next = 0;
  try {
    next = tensor_dim(big, n_max + 1);
  } catch (const ResourceError&) {
    return true;
  }
  (void)next;
  const CMatrix id = CMatrix::Identity(big, big);
  const CMatrix up = intersect_subspaces(kron(right[n_max], id), kron(id, right[n_max]));
  return up.cols() > 0;
}

// Block positions for a ladder operator between sectors.
void place(CMatrix& target, const FockBasis& basis, int row_n, int col_n, const CMatrix& block) {
  target.block(basis.offset(row_n), basis.offset(col_n), block.rows(), block.cols()) = block;
}

// Φ_n T where Φ_n(w, k) = <0| ψ-_{w_n} ... ψ-_{w_1} ψ+_{k_1} ... ψ+_{k_n} |0>.
CMatrix pairing_apply(const RMatrix& coll, int n, const CMatrix& t) {
  if (n == 0) return t;
  const int big = coll.m();
  const CMatrix y = annihilation_tensor(coll, n, t);
  const auto sub = static_cast<Eigen::Index>(tensor_dim(big, n - 1));
  CMatrix out(y.rows(), y.cols());
  for (int w = 0; w < big; ++w)
    out.middleRows(w * sub, sub) = pairing_apply(coll, n - 1, y.middleRows(w * sub, sub));
  return out;
}

}  // namespace

FockBasis::FockBasis(RMatrix single, int modes, int n_max, std::vector<Sector> sectors,
                     bool truncated)
    : single_(std::move(single)),
      collective_(collective_of(single_, modes)),
      modes_(modes),
      n_max_(n_max),
      sectors_(std::move(sectors)),
      truncated_(truncated) {
  offsets_.reserve(sectors_.size());
  for (const auto& s : sectors_) {
    offsets_.push_back(total_dim_);
    total_dim_ += s.dim();
  }
}

std::vector<int> FockBasis::sector_dims() const {
  std::vector<int> d;
  for (const auto& s : sectors_) d.push_back(s.dim());
  return d;
}

std::vector<BasisLabel> FockBasis::labels() const {
  std::vector<BasisLabel> out;
  for (const auto& s : sectors_) out.insert(out.end(), s.labels.begin(), s.labels.end());
  return out;
}

CMatrix FockBasis::project(int n, const CMatrix& tensors) const {
  const Sector& s = sector(n);
  if (tensors.rows() != s.right.rows())
    throw ShapeError("tensor length does not match the " + std::to_string(n) + "-particle space");
  if (s.dim() == 0) return CMatrix::Zero(tensors.rows(), tensors.cols());
  return s.right * (s.core * (s.left.adjoint() * tensors));
}

CVector FockBasis::project(int n, const CVector& tensor) const {
  return project(n, CMatrix(tensor)).col(0);
}

CVector FockBasis::coordinates(int n, const CVector& tensor) const {
  const Sector& s = sector(n);
  if (s.dim() == 0) return CVector(0);
  return s.coord_map * project(n, tensor);
}

std::vector<CMatrix> symmetric_subspaces(const RMatrix& r, int n_max, bool adjoint) {
  if (n_max < 0) throw ShapeError("n_max must be nonnegative");
  const int m = r.m();
  std::vector<CMatrix> out;
  out.push_back(CMatrix::Identity(1, 1));
  if (n_max >= 1) out.push_back(CMatrix::Identity(m, m));
  if (n_max >= 2) {
    tensor_dim(m, 2);
    const CMatrix g = adjoint ? CMatrix(r.matrix().adjoint()) : r.matrix();
    out.push_back(nullspace(g - CMatrix::Identity(g.rows(), g.cols())));
  }
  const CMatrix id = CMatrix::Identity(m, m);
  for (int n = 3; n <= n_max; ++n) {
    const CMatrix& prev = out.back();
    if (prev.cols() == 0) {
      // Everything above an empty sector is empty; avoid allocating m^n rows.
      std::size_t rows = 0;
      try {
        rows = tensor_dim(m, n);
      } catch (const ResourceError&) {
        rows = 0;
      }
      out.emplace_back(static_cast<Eigen::Index>(rows), 0);
      continue;
    }
    tensor_dim(m, n);
    out.push_back(intersect_subspaces(kron(prev, id), kron(id, prev)));
  }
  return out;
}

std::optional<int> natural_nmax(const RMatrix& r, int modes) {
  if (const auto& h = r.hilbert_closed_form()) {
    if (!h->is_polynomial()) return std::nullopt;
    return h->degree() * modes;
  }
  // No closed form: grow the symmetric subspaces until they vanish.
  const int m = r.m();
  const CMatrix id = CMatrix::Identity(m, m);
  CMatrix prev = CMatrix::Identity(m, m);
  for (int n = 2;; ++n) {
    try {
      tensor_dim(m, n);
    } catch (const ResourceError&) {
      return std::nullopt;
    }
    prev = n == 2 ? nullspace(r.matrix() - CMatrix::Identity(m * m, m * m))
                  : intersect_subspaces(kron(prev, id), kron(id, prev));
    if (prev.cols() == 0) return (n - 1) * modes;
  }
}

FockBasis build_basis(const RMatrix& r, int n_max, int modes) {
  if (modes < 1) throw ShapeError("mode count must be positive");
  if (n_max < 0) throw ShapeError("n_max must be nonnegative");
  const RMatrix coll = collective_of(r, modes);
  const int big = coll.m();
  const int m = r.m();
  // Fail before any work when the top nonempty sector cannot fit.
  if (const auto top = natural_nmax(r, modes)) tensor_dim(big, std::min(n_max, *top));
  else tensor_dim(big, n_max);
  const auto right = symmetric_subspaces(coll, n_max, false);
  const bool hermitian = coll.is_hermitian();
  const auto left = hermitian ? right : symmetric_subspaces(coll, n_max, true);
  std::vector<CMatrix> single;
  if (modes > 1) single = symmetric_subspaces(r, n_max, false);
  std::vector<int> single_degs;
  for (const auto& v : single) single_degs.push_back(static_cast<int>(v.cols()));

  std::vector<Sector> sectors;
  for (int n = 0; n <= n_max; ++n) {
    Sector s;
    s.n = n;
    s.right = right[n];
    s.left = left[n];
    if (s.right.cols() != s.left.cols())
      throw ConstraintError("left and right symmetric subspaces differ in dimension at n = " +
                            std::to_string(n));
    s.core = checked_inverse(CMatrix(s.left.adjoint() * s.right), "symmetrizer core");
    if (modes == 1 || s.right.cols() == 0) {
      s.states = s.right;
      s.coord_map = s.right.adjoint();
      for (int a = 0; a < s.right.cols(); ++a) s.labels.push_back({n, {n}, {a}});
      sectors.push_back(std::move(s));
      continue;
    }
    std::vector<std::vector<int>> occs;
    std::vector<int> cur;
    occupations(modes, n, single_degs, cur, occs);
    std::vector<CVector> cols;
    for (const auto& occ : occs) {
      // Odometer over the degeneracy indices, last mode fastest.
      std::vector<int> alpha(modes, 0);
      while (true) {
        CVector t = CVector::Ones(1);
        for (int j = 0; j < modes; ++j)
          t = kron_vec(t, embed_tensor(single[occ[j]].col(alpha[j]), m, occ[j], j, big));
        cols.push_back(std::move(t));
        s.labels.push_back({n, occ, alpha});
        int j = modes - 1;
        while (j >= 0 && ++alpha[j] == single_degs[occ[j]]) alpha[j--] = 0;
        if (j < 0) break;
      }
    }
    if (static_cast<Eigen::Index>(cols.size()) != s.right.cols())
      throw ConstraintError("multi-mode basis has " + std::to_string(cols.size()) +
                            " states but the symmetric subspace has dimension " +
                            std::to_string(s.right.cols()) + " at n = " + std::to_string(n));
    CMatrix raw(s.right.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) raw.col(static_cast<Eigen::Index>(c)) = cols[c];
    s.states = s.right * (s.core * (s.left.adjoint() * raw));
    s.coord_map = checked_inverse(CMatrix(s.right.adjoint() * s.states), "multi-mode basis") *
                  s.right.adjoint();
    sectors.push_back(std::move(s));
  }
  const bool truncated = top_is_truncated(coll, right, n_max);
  return FockBasis(r, modes, n_max, std::move(sectors), truncated);
}

std::vector<int> exclusion_statistics(const RMatrix& r, int n_max) {
  std::vector<int> d;
  for (const auto& v : symmetric_subspaces(r, n_max, false)) d.push_back(static_cast<int>(v.cols()));
  return d;
}

CMatrix annihilation_tensor(const RMatrix& r, int n, const CMatrix& tensors) {
  if (n < 1) throw ShapeError("cannot annihilate from the vacuum tensor");
  if (n == 1) return tensors;
  CMatrix y = tensors;
  for (int j = n - 2; j >= 0; --j)
    y = tensors + kernels::apply_two_slot(r.matrix(), r.m(), n, j, y);
  return y;
}

namespace {

// coord_map * right * core: coordinates of the projection of anything whose
// left-space overlap is known.
std::vector<CMatrix> coordinate_kernels(const FockBasis& basis) {
  std::vector<CMatrix> k;
  for (const auto& s : basis.sectors()) k.push_back(s.coord_map * s.right * s.core);
  return k;
}

void check_index(const FockBasis& basis, int mode, int internal) {
  if (mode < 0 || mode >= basis.modes() || internal < 0 || internal >= basis.m())
    throw ShapeError("mode/internal index out of range");
}

CMatrix creation_entries(const FockBasis& basis, const std::vector<CMatrix>& kers, int idx) {
  CMatrix out = CMatrix::Zero(basis.total_dim(), basis.total_dim());
  for (int n = 0; n < basis.n_max(); ++n) {
    const Sector& src = basis.sector(n);
    const Sector& dst = basis.sector(n + 1);
    if (src.dim() == 0 || dst.dim() == 0) continue;
    const Eigen::Index block = src.states.rows();
    const CMatrix overlap = dst.left.middleRows(idx * block, block).adjoint() * src.states;
    place(out, basis, n + 1, n, kers[n + 1] * overlap);
  }
  return out;
}

CMatrix annihilation_entries(const FockBasis& basis, const std::vector<CMatrix>& kers,
                             const std::vector<CMatrix>& lowered, int idx) {
  CMatrix out = CMatrix::Zero(basis.total_dim(), basis.total_dim());
  for (int n = 1; n <= basis.n_max(); ++n) {
    const Sector& src = basis.sector(n);
    const Sector& dst = basis.sector(n - 1);
    if (src.dim() == 0 || dst.dim() == 0) continue;
    const Eigen::Index block = dst.right.rows();
    const CMatrix overlap = dst.left.adjoint() * lowered[n].middleRows(idx * block, block);
    place(out, basis, n - 1, n, kers[n - 1] * overlap);
  }
  return out;
}

std::vector<CMatrix> lowered_states(const FockBasis& basis) {
  std::vector<CMatrix> out(basis.n_max() + 1);
  for (int n = 1; n <= basis.n_max(); ++n) {
    const Sector& s = basis.sector(n);
    if (s.dim() > 0) out[n] = annihilation_tensor(basis.collective(), n, s.states);
  }
  return out;
}

}  // namespace

LadderSet ladder_operators(const FockBasis& basis) {
  const auto kers = coordinate_kernels(basis);
  const auto lowered = lowered_states(basis);
  const int big = basis.collective_dim();
  LadderSet set;
  set.plus.resize(big);
  set.minus.resize(big);
#pragma omp parallel for schedule(dynamic)
  for (int a = 0; a < big; ++a) {
    set.plus[a] = creation_entries(basis, kers, a);
    set.minus[a] = annihilation_entries(basis, kers, lowered, a);
  }
  set.truncation_dropped = basis.truncated();
  return set;
}

OperatorMatrix creation_matrix(const FockBasis& basis, int mode, int internal) {
  check_index(basis, mode, internal);
  return {creation_entries(basis, coordinate_kernels(basis), mode * basis.m() + internal),
          basis.labels(), basis.truncated()};
}

OperatorMatrix annihilation_matrix(const FockBasis& basis, int mode, int internal) {
  check_index(basis, mode, internal);
  return {annihilation_entries(basis, coordinate_kernels(basis), lowered_states(basis),
                               mode * basis.m() + internal),
          basis.labels(), false};
}

double CrReport::max_residual() const {
  return std::max({annihilate_create, create_create, annihilate_annihilate});
}

CrReport cr_residuals(const RMatrix& single, int modes, const std::vector<CMatrix>& plus,
                      const std::vector<CMatrix>& minus, int columns) {
  const RMatrix coll = collective_of(single, modes);
  const int big = coll.m();
  if (static_cast<int>(plus.size()) != big || static_cast<int>(minus.size()) != big)
    throw ShapeError("ladder family size does not match the collective index range");
  CrReport rep;
  if (big == 0 || columns == 0) return rep;
  const Eigen::Index dim = plus[0].rows();

  // Nonzero entries of the collective R: (row pair, column pair, value).
  struct Entry {
    int x, y, z, w;
    cplx v;
  };
  std::vector<Entry> entries;
  const CMatrix& rm = coll.matrix();
  for (int col = 0; col < rm.cols(); ++col)
    for (int row = 0; row < rm.rows(); ++row)
      if (std::abs(rm(row, col)) > 0.0)
        entries.push_back({row / big, row % big, col / big, col % big, rm(row, col)});

  std::vector<CMatrix> pm_cols(big), mm_cols(big);
  for (int a = 0; a < big; ++a) {
    pm_cols[a] = plus[a].leftCols(columns);
    mm_cols[a] = minus[a].leftCols(columns);
  }

  auto run = [&](auto lhs, auto product, auto target_of) {
    std::vector<CMatrix> res(static_cast<std::size_t>(big) * big);
#pragma omp parallel for schedule(dynamic)
    for (int ab = 0; ab < big * big; ++ab) res[ab] = lhs(ab / big, ab % big);
    std::vector<CMatrix> prods(static_cast<std::size_t>(big) * big);
#pragma omp parallel for schedule(dynamic)
    for (int cd = 0; cd < big * big; ++cd) prods[cd] = product(cd / big, cd % big);
    // Each residual (A, B) is touched by a fixed subsequence of `entries`;
    // parallelizing over (A, B) keeps the summation order deterministic.
#pragma omp parallel for schedule(dynamic)
    for (int ab = 0; ab < big * big; ++ab)
      for (const Entry& e : entries) {
        int a = 0, b = 0, c = 0, d = 0;
        target_of(e, a, b, c, d);
        if (a * big + b != ab) continue;
        res[ab] -= e.v * prods[c * big + d];
      }
    double worst = 0.0;
    for (const auto& r : res) worst = std::max(worst, max_abs(r));
    return worst;
  };

  // ψ-_A ψ+_B - Σ R^{AC}_{BD} ψ+_C ψ-_D - δ_AB
  rep.annihilate_create = run(
      [&](int a, int b) {
        CMatrix l = minus[a] * pm_cols[b];
        if (a == b) l -= CMatrix::Identity(dim, columns);
        return l;
      },
      [&](int c, int d) { return CMatrix(plus[c] * mm_cols[d]); },
      [](const Entry& e, int& a, int& b, int& c, int& d) {
        a = e.x, c = e.y, b = e.z, d = e.w;
      });
  // ψ+_A ψ+_B - Σ R^{CD}_{AB} ψ+_C ψ+_D
  rep.create_create = run([&](int a, int b) { return CMatrix(plus[a] * pm_cols[b]); },
                          [&](int c, int d) { return CMatrix(plus[c] * pm_cols[d]); },
                          [](const Entry& e, int& a, int& b, int& c, int& d) {
                            c = e.x, d = e.y, a = e.z, b = e.w;
                          });
  // ψ-_A ψ-_B - Σ R^{BA}_{DC} ψ-_C ψ-_D
  rep.annihilate_annihilate = run([&](int a, int b) { return CMatrix(minus[a] * mm_cols[b]); },
                                  [&](int c, int d) { return CMatrix(minus[c] * mm_cols[d]); },
                                  [](const Entry& e, int& a, int& b, int& c, int& d) {
                                    b = e.x, a = e.y, d = e.z, c = e.w;
                                  });
  return rep;
}

CrReport verify_crs(const FockBasis& basis, const LadderSet& ops) {
  const int columns = basis.truncated() ? basis.offset(basis.n_max()) : basis.total_dim();
  CrReport rep = cr_residuals(basis.single_mode(), basis.modes(), ops.plus, ops.minus, columns);
  rep.sectors_checked = basis.truncated() ? basis.n_max() : basis.n_max() + 1;
  rep.truncated = basis.truncated();
  return rep;
}

cplx dual_pairing(const FockBasis& basis, const std::vector<int>& bra_word,
                  const std::vector<int>& ket_word) {
  if (bra_word.size() != ket_word.size()) return 0.0;
  const RMatrix& coll = basis.collective();
  const int big = coll.m();
  for (int k : bra_word)
    if (k < 0 || k >= big) throw ShapeError("word index out of range");
  for (int k : ket_word)
    if (k < 0 || k >= big) throw ShapeError("word index out of range");
  const int n = static_cast<int>(ket_word.size());
  // Raw tensor e_{k1} ⊗ ... ⊗ e_{kn}; lowering needs no projection.
  Eigen::Index pos = 0;
  for (int k : ket_word) pos = pos * big + k;
  CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(tensor_dim(big, n)), 1);
  t(pos, 0) = 1.0;
  for (int step = 0; step < n; ++step) {
    const int level = n - step;
    const CMatrix y = annihilation_tensor(coll, level, t);
    const auto sub = static_cast<Eigen::Index>(tensor_dim(big, level - 1));
    t = y.middleRows(bra_word[step] * sub, sub);
  }
  return t(0, 0);
}

CMatrix gram_matrix(const FockBasis& basis, int n) {
  const Sector& s = basis.sector(n);
  if (s.dim() == 0) return CMatrix(0, 0);
  return s.states.adjoint() * pairing_apply(basis.collective(), n, s.states);
}

CMatrix full_gram_matrix(const FockBasis& basis) {
  CMatrix g = CMatrix::Zero(basis.total_dim(), basis.total_dim());
  for (const auto& s : basis.sectors())
    if (s.dim() > 0) {
      const CMatrix block = gram_matrix(basis, s.n);
      g.block(basis.offset(s.n), basis.offset(s.n), block.rows(), block.cols()) = block;
    }
  return g;
}

FockState FockState::vacuum() {
  FockState s;
  s.components[0] = CVector::Ones(1);
  return s;
}

bool FockState::approx_equal(const FockState& other, double tol) const {
  std::set<int> keys;
  for (const auto& [n, v] : components) keys.insert(n);
  for (const auto& [n, v] : other.components) keys.insert(n);
  for (int n : keys) {
    const auto a = components.find(n);
    const auto b = other.components.find(n);
    if (a != components.end() && b != other.components.end()) {
      if (a->second.size() != b->second.size()) return false;
      if (a->second.size() && (a->second - b->second).cwiseAbs().maxCoeff() > tol) return false;
    } else {
      const CVector& v = a != components.end() ? a->second : b->second;
      if (v.size() && v.cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

double FockState::norm() const {
  double sq = 0.0;
  for (const auto& [n, v] : components) sq += v.squaredNorm();
  return std::sqrt(sq);
}

FirstQuantizationReport first_quantization_check(const RMatrix& r, int n, int modes,
                                                 const CVector& wavefunction, double tol) {
  if (n < 0 || modes < 1) throw ShapeError("invalid particle or mode count");
  const RMatrix coll = collective_of(r, modes);
  const auto dim = static_cast<Eigen::Index>(tensor_dim(coll.m(), n));
  if (wavefunction.size() != dim)
    throw ShapeError("wavefunction must have (modes*m)^n = " + std::to_string(dim) + " entries");
  FirstQuantizationReport rep;
  const CMatrix psi = wavefunction;
  for (int j = 0; j + 1 < n; ++j) {
    const CMatrix moved = kernels::apply_two_slot(coll.matrix(), coll.m(), n, j, psi);
    rep.exchange_residual = std::max(rep.exchange_residual, max_abs(CMatrix(moved - psi)));
  }
  rep.exchange_consistent = rep.exchange_residual <= tol;
  const FockBasis basis = build_basis(r, n, modes);
  rep.state.components[n] = basis.project(n, wavefunction);
  return rep;
}

}  // namespace parastat

#include "parastat/bilinears.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "parastat/errors.hpp"

namespace parastat {
namespace {

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

// Random polynomial of the given degree in the supplied generators: a constant
// plus, for every degree k, two monomials of k randomly chosen generators.
CMatrix random_polynomial(const std::vector<const CMatrix*>& gens, int degree,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  const Eigen::Index dim = gens.front()->rows();
  CMatrix p = cplx(coef(rng), coef(rng)) * CMatrix::Identity(dim, dim);
  for (int k = 1; k <= degree; ++k)
    for (int term = 0; term < 2; ++term) {
      CMatrix mono = CMatrix::Identity(dim, dim);
      for (int f = 0; f < k; ++f) mono = mono * *gens[pick(rng)];
      p += cplx(coef(rng), coef(rng)) * mono;
    }
  return p;
}

}  // namespace

BilinearSet::BilinearSet(int modes, std::vector<CMatrix> e) : modes_(modes), e_(std::move(e)) {
  if (modes_ < 1 || static_cast<int>(e_.size()) != modes_ * modes_)
    throw ShapeError("bilinear set needs modes^2 matrices");
  total_ = CMatrix::Zero(e_[0].rows(), e_[0].cols());
  for (int a = 0; a < modes_; ++a) total_ += number(a);
}

BilinearSet build_bilinears(const FockBasis& basis, const LadderSet& ops) {
  const int modes = basis.modes();
  const int m = basis.m();
  std::vector<CMatrix> e(static_cast<std::size_t>(modes) * modes);
#pragma omp parallel for schedule(dynamic)
  for (int ab = 0; ab < modes * modes; ++ab) {
    const int a = ab / modes, b = ab % modes;
    CMatrix acc = CMatrix::Zero(basis.total_dim(), basis.total_dim());
    for (int i = 0; i < m; ++i) acc += ops.plus[a * m + i] * ops.minus[b * m + i];
    e[ab] = std::move(acc);
  }
  return BilinearSet(modes, std::move(e));
}

GlnReport verify_glN(const BilinearSet& bil, double tol) {
  const int n = bil.modes();
  const int pairs = n * n;
  std::vector<double> worst(static_cast<std::size_t>(pairs) * pairs, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < pairs * pairs; ++k) {
    const int ab = k / pairs, cd = k % pairs;
    const int a = ab / n, b = ab % n, c = cd / n, d = cd % n;
    CMatrix r = commutator(bil.e(a, b), bil.e(c, d));
    if (b == c) r -= bil.e(a, d);
    if (a == d) r += bil.e(c, b);
    worst[k] = max_abs(r);
  }
  GlnReport rep;
  rep.max_residual = *std::max_element(worst.begin(), worst.end());
  rep.passed = rep.max_residual <= tol;
  return rep;
}

double LadderReport::max_residual() const {
  return std::max({e_plus, e_minus, n_plus, n_minus});
}

LadderReport verify_ladder_commutators(const FockBasis& basis, const LadderSet& ops,
                                       const BilinearSet& bil) {
  const int modes = basis.modes();
  const int m = basis.m();
  LadderReport rep;
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int c = 0; c < modes; ++c)
        for (int j = 0; j < m; ++j) {
          CMatrix rp = commutator(bil.e(a, b), ops.plus[c * m + j]);
          if (b == c) rp -= ops.plus[a * m + j];
          CMatrix rm = commutator(bil.e(a, b), ops.minus[c * m + j]);
          if (a == c) rm += ops.minus[b * m + j];
          rep.e_plus = std::max(rep.e_plus, max_abs(rp));
          rep.e_minus = std::max(rep.e_minus, max_abs(rm));
        }
  for (std::size_t k = 0; k < ops.plus.size(); ++k) {
    rep.n_plus = std::max(
        rep.n_plus, max_abs(CMatrix(commutator(bil.total_number(), ops.plus[k]) - ops.plus[k])));
    rep.n_minus = std::max(
        rep.n_minus,
        max_abs(CMatrix(commutator(bil.total_number(), ops.minus[k]) + ops.minus[k])));
  }
  return rep;
}

LocalityReport locality_check(const BilinearSet& bil, const std::set<int>& s1,
                              const std::set<int>& s2, int degree, std::uint64_t seed,
                              int samples) {
  if (s1.empty() || s2.empty()) throw ConstraintError("locality check needs nonempty mode sets");
  for (int a : s1)
    if (s2.count(a)) throw ConstraintError("locality check needs disjoint mode sets");
  for (const auto* s : {&s1, &s2})
    for (int a : *s)
      if (a < 0 || a >= bil.modes()) throw ShapeError("mode index out of range");
  auto generators = [&](const std::set<int>& s) {
    std::vector<const CMatrix*> g;
    for (int a : s)
      for (int b : s) g.push_back(&bil.e(a, b));
    return g;
  };
  const auto g1 = generators(s1);
  const auto g2 = generators(s2);
  std::mt19937_64 rng(seed);
  LocalityReport rep{0.0, seed, degree, samples};
  for (int k = 0; k < samples; ++k) {
    const CMatrix p1 = random_polynomial(g1, degree, rng);
    const CMatrix p2 = random_polynomial(g2, degree, rng);
    rep.max_residual = std::max(rep.max_residual, max_abs(commutator(p1, p2)));
  }
  return rep;
}

}  // namespace parastat

#include "parastat/rmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "parastat/budget.hpp"
#include "parastat/errors.hpp"
#include "parastat/kernels.hpp"

namespace parastat {
namespace {

constexpr double kLambdaCTol = 1e-10;

std::string residual_text(const LambdaCResiduals& r) {
  return "product residual " + std::to_string(r.product) + ", trace residual " +
         std::to_string(r.trace);
}

CMatrix swap_matrix(int m, double sign) {
  const int d = m * m;
  CMatrix s = CMatrix::Zero(d, d);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s(a * m + b, b * m + a) = sign;
  return s;
}

SparseOp sparse_identity(Eigen::Index n) {
  SparseOp id(n, n);
  id.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) id.insert(i, i) = 1.0;
  id.makeCompressed();
  return id;
}

// Largest entrywise mismatch between f(X) and g(X) over identity columns,
// processed in blocks so the full m^3 x m^3 products are never stored.
double blocked_braid_residual(const CMatrix& m2, int m) {
  const Eigen::Index dim = static_cast<Eigen::Index>(m) * m * m;
  const Eigen::Index block = std::max<Eigen::Index>(1, std::min<Eigen::Index>(dim, 512));
  double worst = 0.0;
  for (Eigen::Index start = 0; start < dim; start += block) {
    const Eigen::Index w = std::min(block, dim - start);
    CMatrix x = CMatrix::Zero(dim, w);
    for (Eigen::Index c = 0; c < w; ++c) x(start + c, c) = 1.0;
    // lhs = R12 R23 R12 x, rhs = R23 R12 R23 x
    CMatrix lhs = kernels::apply_two_slot(m2, m, 3, 0, x);
    lhs = kernels::apply_two_slot(m2, m, 3, 1, lhs);
    lhs = kernels::apply_two_slot(m2, m, 3, 0, lhs);
    CMatrix rhs = kernels::apply_two_slot(m2, m, 3, 1, x);
    rhs = kernels::apply_two_slot(m2, m, 3, 0, rhs);
    rhs = kernels::apply_two_slot(m2, m, 3, 1, rhs);
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return worst;
}

}  // namespace

void require_rmatrix_shape(int m, const CMatrix& matrix) {
  if (m < 1) throw ShapeError("R-matrix dimension m must be positive");
  const Eigen::Index d = static_cast<Eigen::Index>(m) * m;
  if (matrix.rows() != d || matrix.cols() != d)
    throw ShapeError("R-matrix must be " + std::to_string(d) + "x" + std::to_string(d) +
                     " for m = " + std::to_string(m) + ", got " +
                     std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()));
}

RMatrix::RMatrix(int m, CMatrix matrix, std::string label, std::optional<RationalSeries> hilbert)
    : m_(m), matrix_(std::move(matrix)), label_(std::move(label)), hilbert_(std::move(hilbert)) {
  require_rmatrix_shape(m_, matrix_);
}

bool RMatrix::is_hermitian(double tol) const { return parastat::is_hermitian(matrix_, tol); }

std::uint64_t RMatrix::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t m64 = m_;
  mix(&m64, sizeof m64);
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
      // Normalize -0.0 so that negating zeros does not change the hash.
      double re = matrix_(r, c).real() + 0.0;
      double im = matrix_(r, c).imag() + 0.0;
      mix(&re, sizeof re);
      mix(&im, sizeof im);
    }
  return h;
}

YbeReport ybe_check(const RMatrix& r, double tol) {
  const CMatrix& mat = r.matrix();
  YbeReport rep;
  rep.involution_residual =
      max_abs(CMatrix(mat * mat - CMatrix::Identity(mat.rows(), mat.cols())));
  require_within_budget(static_cast<std::size_t>(r.m()) * r.m() * r.m(), "YBE check");
  rep.braid_residual = blocked_braid_residual(mat, r.m());
  rep.max_residual = std::max(rep.involution_residual, rep.braid_residual);
  rep.involutive = rep.involution_residual <= tol;
  rep.braid = rep.braid_residual <= tol;
  return rep;
}

LambdaCResiduals lambda_c_residuals(const LambdaC& lc) {
  LambdaCResiduals res;
  const Eigen::Index m = lc.lambda.rows();
  if (lc.lambda.cols() != m || lc.c.rows() != m || lc.c.cols() != m)
    throw ShapeError("lambda and c must be square matrices of equal size");
  const CMatrix prod = lc.lambda * lc.c * lc.lambda.transpose() * lc.c.transpose();
  res.product = max_abs(CMatrix(prod - CMatrix::Identity(m, m)));
  res.trace = std::abs((lc.lambda * lc.c.transpose()).trace() - cplx(2.0, 0.0));
  res.pt = std::max(max_abs(CMatrix(lc.lambda.conjugate() - lc.lambda.transpose())),
                    max_abs(CMatrix(lc.c.conjugate() - lc.c.transpose())));
  return res;
}

LambdaC make_lambda_c(int m) {
  if (m < 2) throw ConstraintError("lambda/c constraints have no solution for m < 2");
  const int pairs = m / 2;
  const double t_mid = (m % 2 == 1) ? 1.0 : 0.0;
  const double s = (2.0 - t_mid) / pairs;
  const cplx t(s / 2.0, std::sqrt(std::max(0.0, 1.0 - s * s / 4.0)));
  std::vector<cplx> ts(m);
  for (int a = 0; a < pairs; ++a) {
    ts[a] = t;
    ts[m - 1 - a] = std::conj(t);  // |t| = 1, so conj(t) = 1/t
  }
  if (m % 2 == 1) ts[pairs] = t_mid;
  LambdaC lc{CMatrix::Zero(m, m), CMatrix::Zero(m, m)};
  for (int a = 0; a < m; ++a) {
    lc.lambda(a, m - 1 - a) = 1.0;
    lc.c(a, m - 1 - a) = ts[a];
  }
  const LambdaCResiduals res = lambda_c_residuals(lc);
  if (res.product > 1e-12 || res.trace > 1e-12)
    throw ConstraintError("make_lambda_c failed its own check: " + residual_text(res));
  return lc;
}

Builtin parse_builtin(const std::string& name) {
  if (name == "ex1") return Builtin::ex1;
  if (name == "ex2") return Builtin::ex2;
  if (name == "ex3") return Builtin::ex3;
  if (name == "ex4") return Builtin::ex4;
  if (name == "fermion") return Builtin::fermion;
  if (name == "boson") return Builtin::boson;
  throw ShapeError("unknown builtin R-matrix '" + name +
                   "' (expected ex1, ex2, ex3, ex4, fermion or boson)");
}

std::string to_string(Builtin b) {
  switch (b) {
    case Builtin::ex1: return "ex1";
    case Builtin::ex2: return "ex2";
    case Builtin::ex3: return "ex3";
    case Builtin::ex4: return "ex4";
    case Builtin::fermion: return "fermion";
    case Builtin::boson: return "boson";
  }
  return "unknown";
}

RMatrix builtin(Builtin name, int m, const std::optional<LambdaC>& params) {
  if (m < 1) throw ShapeError("m must be positive");
  const int d = m * m;
  const std::string label = to_string(name) + "(m=" + std::to_string(m) + ")";
  const IntPoly one_plus_x{1, 1};
  switch (name) {
    case Builtin::ex1:
    case Builtin::fermion:
      return RMatrix(m, swap_matrix(m, -1.0), label, RationalSeries{poly_pow(one_plus_x, m), {1}});
    case Builtin::ex2: {
      CMatrix mat = swap_matrix(m, 1.0);
      for (int a = 0; a < m; ++a) mat(a * m + a, a * m + a) = -1.0;
      return RMatrix(m, mat, label, RationalSeries{poly_pow(one_plus_x, m), {1}});
    }
    case Builtin::ex3:
      return RMatrix(m, -CMatrix::Identity(d, d), label, RationalSeries{{1, m}, {1}});
    case Builtin::ex4: {
      const LambdaC lc = params ? *params : make_lambda_c(m);
      if (lc.lambda.rows() != m) throw ShapeError("lambda/c size does not match m");
      const LambdaCResiduals res = lambda_c_residuals(lc);
      if (res.product > kLambdaCTol || res.trace > kLambdaCTol)
        throw ConstraintError("lambda/c violate the ex4 constraints: " + residual_text(res));
      CMatrix mat = -CMatrix::Identity(d, d);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            for (int e = 0; e < m; ++e) mat(a * m + b, c * m + e) += lc.lambda(a, b) * lc.c(c, e);
      return RMatrix(m, mat, label, RationalSeries{{1, m, 1}, {1}});
    }
    case Builtin::boson:
      return RMatrix(m, swap_matrix(m, 1.0), label, RationalSeries{{1}, poly_pow({1, -1}, m)});
  }
  throw ShapeError("unknown builtin");
}

RMatrix negate(const RMatrix& r) {
  std::optional<RationalSeries> h;
  if (r.hilbert_closed_form()) h = r.hilbert_closed_form()->reflected_inverse();
  return RMatrix(r.m(), -r.matrix(), "negate(" + r.label() + ")", h);
}

RMatrix direct_product(const RMatrix& r, int modes) {
  if (modes < 1) throw ShapeError("mode count must be positive");
  const int m = r.m();
  const int big = modes * m;
  require_within_budget(static_cast<std::size_t>(big) * big, "direct product R-matrix");
  CMatrix mat = CMatrix::Zero(static_cast<Eigen::Index>(big) * big,
                              static_cast<Eigen::Index>(big) * big);
  // Entry (A B, C D) with C = (b, k), D = (a, l) carries R^{ij}_{kl}.
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              const int A = a * m + i, B = b * m + j, C = b * m + k, D = a * m + l;
              mat(A * big + B, C * big + D) = r(i, j, k, l);
            }
  std::optional<RationalSeries> h;
  if (r.hilbert_closed_form()) h = r.hilbert_closed_form()->power(modes);
  return RMatrix(big, mat, "product(" + std::to_string(modes) + "," + r.label() + ")", h);
}

SnRep::SnRep(RMatrix r, int n) : r_(std::move(r)), n_(n) {
  if (n < 1) throw ShapeError("particle count must be positive");
  dim_ = checked_pow(static_cast<std::size_t>(r_.m()), n, dimension_budget());
}

SparseOp SnRep::generator(int j) const {
  if (j < 0 || j > n_ - 2) throw ShapeError("generator index out of range");
  const Eigen::Index m = r_.m();
  Eigen::Index left = 1, right = 1;
  for (int k = 0; k < j; ++k) left *= m;
  for (int k = j + 2; k < n_; ++k) right *= m;
  SparseOp mid = r_.matrix().sparseView();
  const SparseOp parts[3] = {sparse_identity(left), mid, sparse_identity(right)};
  return kernels::sparse_kron_chain(parts);
}

CMatrix SnRep::apply(int j, const CMatrix& tensors) const {
  return kernels::apply_two_slot(r_.matrix(), r_.m(), n_, j, tensors);
}

CMatrix SnRep::word_product(const std::vector<int>& word) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  CMatrix x = CMatrix::Identity(d, d);
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = apply(*it, x);
  return x;
}

CMatrix SnRep::rho(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw ShapeError("permutation has wrong length");
  return word_product(bubble_sort_word(perm));
}

SnRep sn_generators(const RMatrix& r, int n) { return SnRep(r, n); }

std::vector<int> bubble_sort_word(const std::vector<int>& perm) {
  std::vector<int> p = perm;
  std::vector<int> sorted(p.size());
  std::iota(sorted.begin(), sorted.end(), 0);
  if (!std::is_permutation(p.begin(), p.end(), sorted.begin()))
    throw ShapeError("not a permutation of 0..n-1");
  // p s_{j1} s_{j2} ... s_{jk} = id, hence p = s_{jk} ... s_{j1}.
  std::vector<int> swaps;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      if (p[j] > p[j + 1]) {
        std::swap(p[j], p[j + 1]);
        swaps.push_back(static_cast<int>(j));
        changed = true;
      }
  }
  return {swaps.rbegin(), swaps.rend()};
}

CMatrix symmetrizer(const SnRep& rep) {
  const int n = rep.n();
  const auto d = static_cast<Eigen::Index>(rep.dim());
  // Coset factorization S_k = S_{k-1} · {1, s_{k-2}, s_{k-2}s_{k-3}, ...} gives
  // Σ_σ ρ(σ) = A_2 A_3 ... A_n with A_k = 1 + R_{k-2}(1 + R_{k-3}(1 + ... R_0)).
  CMatrix p = CMatrix::Identity(d, d);
  double norm = 1.0;
  for (int k = n; k >= 2; --k) {
    CMatrix y = p;
    for (int j = 0; j <= k - 2; ++j) y = p + rep.apply(j, y);
    p = std::move(y);
    norm *= k;
  }
  return p / norm;
}

}  // namespace parastat

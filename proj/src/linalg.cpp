#include "parastat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parastat/errors.hpp"

namespace parastat {

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_abs(const SparseOp& a) {
  double best = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseOp::InnerIterator it(a, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

int numerical_rank(const CMatrix& a, double rel_cutoff) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_cutoff * s(0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

CMatrix nullspace(const CMatrix& a, double rel_cutoff) {
  const Eigen::Index cols = a.cols();
  if (cols == 0) return CMatrix(0, 0);
  if (a.rows() == 0) return CMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = rel_cutoff * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  CMatrix basis = svd.matrixV().rightCols(cols - r);
  fix_column_phases(basis);
  return basis;
}

CMatrix column_space(const CMatrix& a, double rel_cutoff) {
  if (a.cols() == 0 || a.rows() == 0) return CMatrix(a.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return CMatrix(a.rows(), 0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_cutoff * s(0)) ++r;
  CMatrix basis = svd.matrixU().leftCols(r);
  fix_column_phases(basis);
  return basis;
}

CMatrix intersect_subspaces(const CMatrix& u, const CMatrix& w, double cutoff) {
  if (u.cols() == 0 || w.cols() == 0) return CMatrix(u.rows(), 0);
  // x ∈ span(u) lies in span(w) iff its component orthogonal to w vanishes.
  const CMatrix residual = u - w * (w.adjoint() * u);
  Eigen::JacobiSVD<CMatrix> svd(residual, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  CMatrix basis = u * svd.matrixV().rightCols(u.cols() - r);
  // Re-orthonormalize; the product is orthonormal up to rounding.
  if (basis.cols() > 0) {
    Eigen::HouseholderQR<CMatrix> qr(basis);
    CMatrix q = qr.householderQ() * CMatrix::Identity(basis.rows(), basis.cols());
    basis = q;
  }
  fix_column_phases(basis);
  return basis;
}

void fix_column_phases(CMatrix& a) {
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      // Ties go to the first index so the choice is reproducible.
      const double v = std::abs(a(r, c));
      if (v > best_abs * (1.0 + 1e-9)) {
        best_abs = v;
        best = r;
      }
    }
    if (best_abs > 0.0) a.col(c) *= std::conj(a(best, c)) / best_abs;
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol * std::max(1.0, max_abs(a));
}

std::size_t checked_pow(std::size_t a, int p, std::size_t limit) {
  std::size_t out = 1;
  for (int k = 0; k < p; ++k) {
    if (a != 0 && out > limit / a)
      throw ResourceError("dimension " + std::to_string(a) + "^" + std::to_string(p) +
                          " exceeds budget " + std::to_string(limit));
    out *= a;
  }
  if (out > limit)
    throw ResourceError("dimension " + std::to_string(out) + " exceeds budget " +
                        std::to_string(limit));
  return out;
}

}  // namespace parastat

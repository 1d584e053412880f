#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace parastat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankCutoff = 1e-8;

double max_abs(const CMatrix& a);
double max_abs(const SparseOp& a);

// Rank with threshold kRankCutoff * largest singular value.
int numerical_rank(const CMatrix& a, double rel_cutoff = kRankCutoff);

// Orthonormal basis of ker(a). Singular values below
// rel_cutoff * max(1, sigma_max) count as zero.
CMatrix nullspace(const CMatrix& a, double rel_cutoff = kRankCutoff);

// Orthonormal basis of the column space of a.
CMatrix column_space(const CMatrix& a, double rel_cutoff = kRankCutoff);

// Orthonormal basis of span(u) ∩ span(w) for matrices with orthonormal columns.
CMatrix intersect_subspaces(const CMatrix& u, const CMatrix& w, double cutoff = kRankCutoff);

// Rotate each column so that its largest-magnitude entry is real and positive.
void fix_column_phases(CMatrix& a);

CMatrix kron(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& a, double tol);

// a^p with overflow detection; throws ResourceError when the result exceeds `limit`.
std::size_t checked_pow(std::size_t a, int p, std::size_t limit);

}  // namespace parastat

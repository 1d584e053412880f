#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "parastat/fockspace.hpp"
#include "parastat/freegas.hpp"
#include "parastat/linalg.hpp"
#include "parastat/rmatrix.hpp"

namespace parastat {

// On-site operators of the spin model. The local space is the single-mode
// Fock space of R; y± act as the single-mode ladder operators, x+ appends a
// particle on the right of the coefficient tensor and x- is its partner.
struct LocalOps {
  int m = 0;
  int dim = 0;
  std::vector<CMatrix> x_plus, x_minus, y_plus, y_minus;
  // S[i * m + j] = -[y+_i, x-_j],  T[i * m + j] = [y-_i, x+_j]
  std::vector<CMatrix> s, t;
  CMatrix number;
  std::vector<BasisLabel> labels;

  const CMatrix& S(int i, int j) const { return s[i * m + j]; }
  const CMatrix& T(int i, int j) const { return t[i * m + j]; }
};

// Residuals of the on-site relation families.
struct LocalAlgebraReport {
  // y-y+, y+y+, y-y-, x-x+, x+x+, x-x-, [x±, y±] = 0
  std::array<double, 7> relations{};
  double number_sum = 0.0;   // Σ x+x- = Σ y+y- = n
  double number_shift = 0.0; // [n, x±] = ±x±, [n, y±] = ±y±
  // Σ_i S^{ib} T^{ic} = δ_bc,  Σ_b y+_b T^{bc} = x+_c,  Σ_b S^{bc} y-_b = x-_c
  double string_exchange = 0.0;
  // y± moved through S, T with one R contraction, and S S / T T reordered with two.
  double string_crossing = 0.0;
  double max_residual() const;
};

// Throws UnsupportedError when the Hilbert series of R is not a polynomial.
LocalOps build_local_ops(const RMatrix& r, double tol = 1e-10);
LocalAlgebraReport verify_local_algebra(const RMatrix& r, const LocalOps& ops);

struct SpinChainSpec {
  RMatrix r;
  int sites = 1;
  std::vector<double> j;   // size `sites`, j.back() == 0 (open chain)
  std::vector<double> mu;  // size `sites`

  // Accepts J of length sites - 1 (J_N = 0 appended) or sites.
  static SpinChainSpec make(RMatrix r, int sites, std::vector<double> j, std::vector<double> mu);
  // Single-particle matrix: diagonal -μ_a, off-diagonal J_a.
  CMatrix hopping_matrix() const;
};

// Embeds a site operator at `site` (0-based) of an N-site chain.
SparseOp embed_site(const CMatrix& op, int site, int sites);

SparseOp build_hamiltonian_spin(const SpinChainSpec& spec, const LocalOps& ops);

// Jordan–Wigner string operator ψ^±_{a,i}: tensors S (for +) or T (for -) on
// sites 0..a-1 contracted along the auxiliary index, y± on site a. The open
// index i is the first index of the site-0 tensor.
SparseOp mpo_jwt(const SpinChainSpec& spec, const LocalOps& ops, int site, int internal,
                 int sign);

struct ChainOperators {
  std::vector<SparseOp> psi_plus;   // index a * m + i
  std::vector<SparseOp> psi_minus;
};

ChainOperators build_chain_operators(const SpinChainSpec& spec, const LocalOps& ops);

SparseOp build_hamiltonian_para(const SpinChainSpec& spec, const LocalOps& ops,
                                const ChainOperators& psi);

struct MpoCrReport {
  double annihilate_create = 0.0;
  double create_create = 0.0;
  double annihilate_annihilate = 0.0;
  double max_residual() const;
};

MpoCrReport verify_mpo_crs(const SpinChainSpec& spec, const ChainOperators& psi);

// Full spectrum sorted by real part (then imaginary part).
std::vector<cplx> exact_diagonalize(const CMatrix& h);
std::vector<cplx> exact_diagonalize(const SparseOp& h);

// {Σ_k ε_k n_k} with multiplicity Π_k d_{n_k}, ascending.
std::vector<double> free_particle_spectrum(const Eigen::VectorXd& eps, const IntPoly& d);

struct SpectrumReport {
  bool multiset_match = false;
  double max_eigenvalue_gap = 0.0;
  double max_imag = 0.0;
  double spectral_radius = 0.0;
  std::size_t levels = 0;
};

SpectrumReport spectrum_crosscheck(const SpinChainSpec& spec, const LocalOps& ops);

struct ThermalReport {
  Eigen::VectorXd predicted;  // from the single-mode formula
  Eigen::VectorXd traced;     // thermal trace of the MPO bilinear ñ_k
  double max_relative_error = 0.0;
};

ThermalReport thermal_crosscheck(const SpinChainSpec& spec, const LocalOps& ops, double beta);

}  // namespace parastat
